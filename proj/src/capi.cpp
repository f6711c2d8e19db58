#include "vexfem.h"

const char* vexfem_version(void) { return "0.1.0"; }
