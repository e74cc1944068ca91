int for_empty_init(int n) {
    int i = 0;
    int total = 0;
    for (; i < n; i++) {
        total += i * i;
    }
    return total;
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
