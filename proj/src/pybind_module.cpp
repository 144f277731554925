#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "setnet/group.hpp"

namespace py = pybind11;

PYBIND11_MODULE(_setnet, m) {
  m.doc() = "symmetry-enriched tensor network toolkit";
  m.def("group_order", [](const std::string& desc) {
    return setnet::group_from_descriptor(desc)->order();
  });
}
