#include "vexfem.h"

#include <cstdio>

int main() {
  std::printf("vexfem %s\n", vexfem_version());
  return 0;
}
