int collatz(int n) {
    int steps = 0;
    if (n < 1) {
        return -1;
    }
    while (n != 1 && steps < 200) {
        n = n % 2 == 0 ? n / 2 : 3 * n + 1;
        steps++;
    }
    return steps;
}
/* ---driver--- */
#include <stdio.h>
int main(void) {
    int inputs[] = {-3, 0, 1, 2, 3, 7, 27, 97};
    unsigned k;
    for (k = 0; k < sizeof(inputs) / sizeof(inputs[0]); k++)
        printf("%d\n", FUT(inputs[k]));
    return 0;
}
