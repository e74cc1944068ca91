int power_loop(int base, int exp) {
    int result = 1;
    int i;
    for (i = 0; i < exp && i < 12; i++) {
        result *= base;
    }
    return result;
}
/* ---driver--- */
#include <stdio.h>
int main(void) {
    int inputs[][2] = {{2, 0}, {2, 5}, {3, 3}, {5, 2}, {-2, 3}, {1, 9}, {7, 1}, {2, 10}};
    unsigned k;
    for (k = 0; k < sizeof(inputs) / sizeof(inputs[0]); k++)
        printf("%d\n", FUT(inputs[k][0], inputs[k][1]));
    return 0;
}
