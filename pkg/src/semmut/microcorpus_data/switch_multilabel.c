int switch_multilabel(int day) {
    int rate;
    rate = 0;
    switch (day % 7) {
    case 0:
    case 6:
        rate = 15;
        break;
    case 5:
        rate = 12;
        break;
    case 1:
    case 2:
    case 3:
    case 4:
        rate = 10;
        break;
    }
    return rate;
}
/* ---driver--- */
#include <stdio.h>
int main(void) {
    int inputs[] = {0, 1, 2, 3, 4, 5, 6, 13};
    unsigned k;
    for (k = 0; k < sizeof(inputs) / sizeof(inputs[0]); k++)
        printf("%d\n", FUT(inputs[k]));
    return 0;
}
