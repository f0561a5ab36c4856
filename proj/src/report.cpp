#include "frontlab/report.hpp"

#include <cmath>
#include <ostream>
#include <sstream>

#include "frontlab/config.hpp"
#include "frontlab/error.hpp"

namespace frontlab {

namespace {

void indent(std::ostream& out, int depth) {
  for (int i = 0; i < depth; ++i) out << "  ";
}

void write_value(std::ostream& out, const Json& j, int depth) {
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out << "{}";
        return;
      }
      out << "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out << ",\n";
        first = false;
        indent(out, depth + 1);
        out << Json(it.key()).dump() << ": ";
        write_value(out, it.value(), depth + 1);
      }
      out << '\n';
      indent(out, depth);
      out << '}';
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out << "[]";
        return;
      }
      // flat numeric arrays stay on one line
      bool scalar = true;
      for (const auto& e : j) scalar = scalar && e.is_primitive();
      if (scalar) {
        out << '[';
        for (std::size_t i = 0; i < j.size(); ++i) {
          if (i) out << ", ";
          write_value(out, j[i], depth + 1);
        }
        out << ']';
        return;
      }
      out << "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out << ",\n";
        indent(out, depth + 1);
        write_value(out, j[i], depth + 1);
      }
      out << '\n';
      indent(out, depth);
      out << ']';
      return;
    }
    case Json::value_t::number_float: {
      const double v = j.get<double>();
      out << (std::isfinite(v) ? format_double(v) : std::string("null"));
      return;
    }
    default:
      out << j.dump();
  }
}

}  // namespace

void write_json(std::ostream& out, const Json& j) {
  write_value(out, j, 0);
  out << '\n';
}

std::string to_json_text(const Json& j) {
  std::ostringstream os;
  write_json(os, j);
  return os.str();
}

Json vec_json(const Vec& v, int dim) {
  Json a = Json::array();
  for (int i = 0; i < dim; ++i) a.push_back(v[i]);
  return a;
}

Json points_json(const std::vector<Vec>& pts, int dim) {
  Json a = Json::array();
  for (const Vec& p : pts) a.push_back(vec_json(p, dim));
  return a;
}

Json polytope_json(const Polytope& p) {
  Json j;
  j["dim"] = p.dim();
  j["affine_dim"] = p.affine_dim();
  j["vertices"] = points_json(p.vertices(), p.dim());
  return j;
}

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

void CsvTable::add_row(const std::vector<double>& row) {
  require(row.size() == header_.size(), ErrorKind::InvalidArgument, "CSV row width differs from the header");
  rows_.push_back(row);
}

void CsvTable::write(std::ostream& out) const {
  for (std::size_t i = 0; i < header_.size(); ++i) out << (i ? "," : "") << header_[i];
  out << '\n';
  for (const auto& r : rows_) {
    for (std::size_t i = 0; i < r.size(); ++i) out << (i ? "," : "") << format_double(r[i]);
    out << '\n';
  }
}

}  // namespace frontlab
