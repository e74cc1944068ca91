int digits_do(int n) {
    int total = 0;
    if (n < 0) {
        n = -n;
    }
    do {
        total += n % 10;
        n /= 10;
    } while (n > 0);
    return total;
}
/* ---driver--- */
#include <stdio.h>
int main(void) {
    int inputs[] = {0, 5, 42, 100, 999, 1234, -876, 65535};
    unsigned k;
    for (k = 0; k < sizeof(inputs) / sizeof(inputs[0]); k++)
        printf("%d\n", FUT(inputs[k]));
    return 0;
}
