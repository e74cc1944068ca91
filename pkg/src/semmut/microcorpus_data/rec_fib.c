int rec_fib(int n) {
    if (n < 2) {
        return n;
    }
    return rec_fib(n - 1) + rec_fib(n - 2);
}
/* ---driver--- */
#include <stdio.h>
int main(void) {
    int inputs[] = {0, 1, 2, 3, 4, 5, 10, 15};
    unsigned k;
    for (k = 0; k < sizeof(inputs) / sizeof(inputs[0]); k++)
        printf("%d\n", FUT(inputs[k]));
    return 0;
}
