#include "curvepolish/bench.hpp"
int main() { return 0; }
