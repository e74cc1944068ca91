int nested_switch_loop(int n) {
    int score = 0;
    int i;
    for (i = 0; i < n && i < 30; i++) {
        switch (i % 4) {
        case 0:
            score += 5;
            break;
        case 1:
            score -= 2;
            break;
        default:
            score += 1;
            break;
        }
    }
    return score;
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
