int divmod_guard(int a, int b) {
    int q;
    if (b == 0) {
        return -1;
    }
    q = a / b;
    return q * 1000 + a % b;
}
/* ---driver--- */
#include <stdio.h>
int main(void) {
    int inputs[][2] = {{10, 3}, {10, 0}, {-9, 2}, {7, 7}, {0, 5}, {100, 9}, {35, -4}, {8, 1}};
    unsigned k;
    for (k = 0; k < sizeof(inputs) / sizeof(inputs[0]); k++)
        printf("%d\n", FUT(inputs[k][0], inputs[k][1]));
    return 0;
}
