#include <pybind11/pybind11.h>
PYBIND11_MODULE(_mginfer, m) { m.doc() = "placeholder"; }
