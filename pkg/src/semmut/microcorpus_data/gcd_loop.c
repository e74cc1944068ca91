int gcd_loop(int a, int b) {
    if (a < 0) {
        a = -a;
    }
    if (b < 0) {
        b = -b;
    }
    while (b != 0) {
        int t = b;
        b = a % b;
        a = t;
    }
    return a;
}
/* ---driver--- */
#include <stdio.h>
int main(void) {
    int inputs[][2] = {{12, 18}, {7, 13}, {0, 5}, {5, 0}, {-12, 8}, {100, 75}, {21, 34}, {17, 17}};
    unsigned k;
    for (k = 0; k < sizeof(inputs) / sizeof(inputs[0]); k++)
        printf("%d\n", FUT(inputs[k][0], inputs[k][1]));
    return 0;
}
