int abs_ternary(int x) {
    int mag = 0;
    mag += x < 0 ? -x : x;
    return mag;
}
/* ---driver--- */
#include <stdio.h>
int main(void) {
    int inputs[] = {-21, -8, -1, 0, 1, 8, 13, 34};
    unsigned k;
    for (k = 0; k < sizeof(inputs) / sizeof(inputs[0]); k++)
        printf("%d\n", FUT(inputs[k]));
    return 0;
}
