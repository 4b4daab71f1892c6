#include <cstdio>
int main(){ std::puts("hslab"); return 0; }
