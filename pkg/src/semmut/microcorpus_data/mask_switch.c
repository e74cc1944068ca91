int mask_switch(int code) {
    int kind = 0;
    switch (code & 7) {
    case 0:
        kind = 1;
        break;
    case 1:
    case 3:
    case 5:
    case 7:
        kind = 2;
        break;
    case 2:
    case 6:
        kind = 3;
        break;
    default:
        kind = 4;
        break;
    }
    return kind * 10 + (code & 7);
}
/* ---driver--- */
#include <stdio.h>
int main(void) {
    int inputs[] = {0, 1, 2, 3, 4, 5, 6, 7};
    unsigned k;
    for (k = 0; k < sizeof(inputs) / sizeof(inputs[0]); k++)
        printf("%d\n", FUT(inputs[k]));
    return 0;
}
