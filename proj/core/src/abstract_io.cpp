#include "crcurv/abstract_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "crcurv/errors.hpp"

namespace crcurv {

namespace {

std::string fmt_full(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

[[noreturn]] void fail_line(int line, const std::string& what) {
  fail(Errc::input, "abstract data line " + std::to_string(line) + ": " + what);
}

std::vector<std::string> tokenize(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream iss(s);
  std::string tok;
  while (iss >> tok) out.push_back(tok);
  return out;
}

double parse_number(const std::string& tok, int line) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(tok, &pos);
  } catch (const std::exception&) {
    fail_line(line, "expected a number, got '" + tok + "'");
  }
  if (pos != tok.size()) fail_line(line, "trailing characters in number '" + tok + "'");
  if (!std::isfinite(v)) fail_line(line, "non-finite number '" + tok + "'");
  return v;
}

int parse_int(const std::string& tok, int line) {
  std::size_t pos = 0;
  int v = 0;
  try {
    v = std::stoi(tok, &pos);
  } catch (const std::exception&) {
    fail_line(line, "expected an integer, got '" + tok + "'");
  }
  if (pos != tok.size()) fail_line(line, "trailing characters in integer '" + tok + "'");
  return v;
}

std::vector<std::string> split_csv(const std::string& s, int line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      if (cur.empty()) fail_line(line, "empty label in list '" + s + "'");
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (cur.empty()) fail_line(line, "empty label in list '" + s + "'");
  out.push_back(cur);
  return out;
}

}  // namespace

AbstractCriticalData parse_abstract(std::istream& in) {
  AbstractCriticalData data;
  enum class Section { none, points, pairs, mu };
  Section section = Section::none;
  bool saw_schema = false;
  // Pair rows are collected first; the dense table needs the final count.
  std::vector<std::pair<std::pair<std::string, std::string>, double>> pair_rows;

  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    if (const std::size_t hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    const std::vector<std::string> toks = tokenize(raw);
    if (toks.empty()) continue;

    if (!saw_schema) {
      // Accept "schema = 1", "schema=1", "schema =1", "schema= 1".
      std::string joined;
      for (const std::string& t : toks) joined += t;
      if (joined != "schema=1")
        fail_line(line, "expected 'schema = 1' as the first directive, got '" + raw + "'");
      saw_schema = true;
      continue;
    }
    if (toks.size() == 1 && toks[0].front() == '[') {
      if (toks[0] == "[points]")
        section = Section::points;
      else if (toks[0] == "[pairs]")
        section = Section::pairs;
      else if (toks[0] == "[mu]")
        section = Section::mu;
      else
        fail_line(line, "unknown section '" + toks[0] + "'");
      continue;
    }

    switch (section) {
      case Section::none:
        fail_line(line, "data before any section header");
      case Section::points: {
        if (toks.size() != 5)
          fail_line(line, "point rows need 5 fields: label K lapK A morse");
        AbstractPoint pt;
        pt.label = toks[0];
        pt.k = parse_number(toks[1], line);
        pt.lap_k = parse_number(toks[2], line);
        pt.a = parse_number(toks[3], line);
        pt.morse = parse_int(toks[4], line);
        if (data.point_index(pt.label) >= 0)
          fail_line(line, "duplicate point label '" + pt.label + "'");
        data.points.push_back(std::move(pt));
        break;
      }
      case Section::pairs: {
        if (toks.size() != 3) fail_line(line, "pair rows need 3 fields: label label G");
        if (toks[0] == toks[1]) fail_line(line, "pair row references a point twice");
        pair_rows.push_back({{toks[0], toks[1]}, parse_number(toks[2], line)});
        break;
      }
      case Section::mu: {
        if (toks.size() != 3) fail_line(line, "mu rows need 3 fields: labels k value");
        MuEntry e;
        e.labels = split_csv(toks[0], line);
        e.k = parse_int(toks[1], line);
        e.value = parse_int(toks[2], line);
        data.mu.push_back(std::move(e));
        break;
      }
    }
  }
  if (!saw_schema) fail(Errc::input, "abstract data: empty input (missing 'schema = 1')");
  if (data.points.empty()) fail(Errc::input, "abstract data: no points");

  const std::size_t n = data.points.size();
  data.green.assign(n * n, 0.0);
  std::vector<bool> filled(n * n, false);
  for (const auto& [labels, g] : pair_rows) {
    const int i = data.point_index(labels.first);
    const int j = data.point_index(labels.second);
    if (i < 0) fail(Errc::input, "pair row references unknown label '" + labels.first + "'");
    if (j < 0) fail(Errc::input, "pair row references unknown label '" + labels.second + "'");
    const std::size_t a = static_cast<std::size_t>(i), b = static_cast<std::size_t>(j);
    if (filled[a * n + b])
      fail(Errc::input, "duplicate pair (" + labels.first + "," + labels.second + ")");
    data.green[a * n + b] = g;
    data.green[b * n + a] = g;
    filled[a * n + b] = filled[b * n + a] = true;
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (!filled[i * n + j])
        fail(Errc::input, "missing pair (" + data.points[i].label + "," +
                              data.points[j].label + ")");
  data.validate();
  return data;
}

AbstractCriticalData parse_abstract_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::input, "cannot open data file '" + path + "'");
  return parse_abstract(in);
}

std::string serialize_abstract(const AbstractCriticalData& data) {
  data.validate();
  std::string out = "schema = 1\n\n[points]\n# label K lapK A morse\n";
  for (const AbstractPoint& pt : data.points) {
    out += pt.label;
    out += " " + fmt_full(pt.k) + " " + fmt_full(pt.lap_k) + " " + fmt_full(pt.a) + " " +
           std::to_string(pt.morse) + "\n";
  }
  const std::size_t n = data.points.size();
  if (n > 1) {
    out += "\n[pairs]\n# label label G\n";
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        out += data.points[i].label + " " + data.points[j].label + " " +
               fmt_full(data.green[i * n + j]) + "\n";
  }
  if (!data.mu.empty()) {
    out += "\n[mu]\n# labels k value\n";
    for (const MuEntry& e : data.mu) {
      std::string labels;
      for (std::size_t i = 0; i < e.labels.size(); ++i) {
        if (i) labels += ",";
        labels += e.labels[i];
      }
      out += labels + " " + std::to_string(e.k) + " " + std::to_string(e.value) + "\n";
    }
  }
  return out;
}

AbstractCriticalData make_abstract(const std::vector<CriticalPointRecord>& records,
                                   const GreenData& green) {
  if (records.empty()) fail(Errc::input, "make_abstract: no critical point records");
  AbstractCriticalData data;
  const std::size_t n = records.size();
  data.points.reserve(n);
  for (const CriticalPointRecord& r : records) {
    AbstractPoint pt;
    pt.label = r.label;
    pt.k = r.k_value;
    pt.lap_k = r.sublap_K;
    pt.a = green.a_at(r.location);
    pt.morse = r.morse_index;
    data.points.push_back(std::move(pt));
  }
  data.green.assign(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double g = greens_function(green, records[i].location, records[j].location);
      data.green[i * n + j] = g;
      data.green[j * n + i] = g;
    }
  }
  data.validate();
  return data;
}

}  // namespace crcurv
