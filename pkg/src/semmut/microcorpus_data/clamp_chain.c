int clamp_chain(int v) {
    int out;
    if (v < 0) {
        out = 0;
    } else if (v > 100) {
        out = 100;
    } else {
        out = v;
    }
    return out;
}
/* ---driver--- */
#include <stdio.h>
int main(void) {
    int inputs[] = {-50, -1, 0, 1, 50, 99, 100, 250};
    unsigned k;
    for (k = 0; k < sizeof(inputs) / sizeof(inputs[0]); k++)
        printf("%d\n", FUT(inputs[k]));
    return 0;
}
