int if_else(int x) {
    int out;
    if (x % 3 == 0) {
        out = x / 3;
    } else {
        out = x * 2 + 1;
    }
    return out;
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
