int while_continue(int n) {
    int i = 0;
    int odd_sum = 0;
    while (i < n) {
        i++;
        if (i % 2 == 0) {
            continue;
        }
        odd_sum += i;
    }
    return odd_sum;
}
/* ---driver--- */
#include <stdio.h>
int main(void) {
    int inputs[] = {0, 1, 2, 3, 5, 8, 13, 21};
    unsigned k;
    for (k = 0; k < sizeof(inputs) / sizeof(inputs[0]); k++)
        printf("%d\n", FUT(inputs[k]));
    return 0;
}
