int poly_eval(int x) {
    int a = 3, b = -2, c = 7;
    int acc = 0;
    int i;
    for (i = 0; i < 2; i++) {
        acc = acc * x + a;
        a = b;
        b = c;
    }
    return acc + b;
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
