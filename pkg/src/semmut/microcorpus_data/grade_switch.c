int grade_switch(int score) {
    int grade;
    grade = 0;
    switch (score / 10) {
    case 10:
        grade = 5;
        break;
    case 9:
        grade = 4;
        break;
    case 8:
        grade = 3;
        break;
    default:
        grade = 1;
        break;
    }
    return grade;
}
/* ---driver--- */
#include <stdio.h>
int main(void) {
    int inputs[] = {0, 35, 55, 79, 80, 89, 95, 100};
    unsigned k;
    for (k = 0; k < sizeof(inputs) / sizeof(inputs[0]); k++)
        printf("%d\n", FUT(inputs[k]));
    return 0;
}
