int count_do(int n) {
    int steps = 0;
    do {
        steps++;
        n -= 3;
    } while (n > 0);
    return steps;
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
