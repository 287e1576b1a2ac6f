#pragma once

// Plain-text serialization of AbstractCriticalData, and the bridge that
// assembles such data from the analytic sphere pipeline.
//
// Format (schema = 1):
//
//   schema = 1
//   [points]
//   # label  K  lapK  A  morse
//   y1 2 -48 0 3
//   [pairs]
//   # label label G
//   y1 y2 402.1
//   [mu]
//   # comma-separated labels, level, value
//   y1,y2 3 0
//
// '#' starts a comment; blank lines are skipped; [mu] is optional; the pair
// table must cover every unordered pair of points. Numbers are written with
// enough digits to round-trip exactly.

#include <iosfwd>
#include <string>
#include <vector>

#include "crcurv/criterion.hpp"
#include "crcurv/sphere.hpp"

namespace crcurv {

AbstractCriticalData parse_abstract(std::istream& in);
AbstractCriticalData parse_abstract_file(const std::string& path);

std::string serialize_abstract(const AbstractCriticalData& data);

// Abstract data from analytic critical point records: labels, invariants and
// regular parts are taken from the records (re-evaluating A through `green`),
// pair values from the Green's function.
AbstractCriticalData make_abstract(const std::vector<CriticalPointRecord>& records,
                                   const GreenData& green);

}  // namespace crcurv
