#pragma once

// File formats: sweep CSV, sweep SVG plot, and JSON reports.
//
// CSV: header "driver,index,re,im,is_real", '.' decimals, '\n' line endings,
// numbers printed with 17 significant digits. JSON keys keep insertion order.

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include "ptlat/dieudonne.hpp"
#include "ptlat/exceptional.hpp"
#include "ptlat/formulas.hpp"
#include "ptlat/metric.hpp"

namespace ptlat {

using Json = nlohmann::ordered_json;

inline std::string format_number(double x) {
  if (x == 0.0) x = 0.0;  // no "-0"
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline void write_sweep_csv(std::ostream& os, const SweepTable& table) {
  os << "driver,index,re,im,is_real\n";
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.spectrum.size(); ++i) {
      const auto& e = row.spectrum.eigenvalues[i];
      os << format_number(row.driver) << ',' << i << ',' << format_number(e.real()) << ',' << format_number(e.imag()) << ','
         << (row.spectrum.real_flags[i] ? 1 : 0) << '\n';
    }
  }
}

/// Self-contained SVG 1.1: one polyline per eigenvalue index (real parts),
/// grid intervals with complex pairs shaded, complex points marked.
inline void write_sweep_svg(std::ostream& os, const SweepTable& table, const std::string& title = "") {
  const double width = 640, height = 480, margin = 50;
  double xmin = table.grid.front(), xmax = table.grid.back();
  double ymin = 0, ymax = 0;
  bool first = true;
  for (const auto& row : table.rows)
    for (const auto& e : row.spectrum.eigenvalues) {
      if (first) {
        ymin = ymax = e.real();
        first = false;
      }
      ymin = std::min(ymin, e.real());
      ymax = std::max(ymax, e.real());
    }
  if (ymax - ymin < 1e-12) {
    ymin -= 1.0;
    ymax += 1.0;
  }
  if (xmax - xmin < 1e-12) xmax = xmin + 1.0;
  auto px = [&](double x) { return margin + (x - xmin) / (xmax - xmin) * (width - 2 * margin); };
  auto py = [&](double y) { return height - margin - (y - ymin) / (ymax - ymin) * (height - 2 * margin); };
  auto num = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return std::string(buf);
  };

  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << width << "\" height=\"" << height << "\" viewBox=\"0 0 "
     << width << ' ' << height << "\">\n";
  os << "<rect x=\"0\" y=\"0\" width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";
  if (!title.empty()) os << "<text x=\"" << width / 2 << "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">" << title << "</text>\n";

  // Shade grid intervals where some eigenvalue is complex.
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    if (table.rows[i].real_count == table.rows[i].spectrum.size()) continue;
    const double x0 = i == 0 ? table.grid[i] : 0.5 * (table.grid[i - 1] + table.grid[i]);
    const double x1 = i + 1 == table.rows.size() ? table.grid[i] : 0.5 * (table.grid[i] + table.grid[i + 1]);
    os << "<rect x=\"" << num(px(x0)) << "\" y=\"" << margin << "\" width=\"" << num(std::max(px(x1) - px(x0), 1.0)) << "\" height=\""
       << height - 2 * margin << "\" fill=\"#f2d7d5\" stroke=\"none\"/>\n";
  }

  os << "<rect x=\"" << margin << "\" y=\"" << margin << "\" width=\"" << width - 2 * margin << "\" height=\"" << height - 2 * margin
     << "\" fill=\"none\" stroke=\"black\"/>\n";
  os << "<text x=\"" << margin << "\" y=\"" << height - margin + 16 << "\" font-size=\"11\">" << num(xmin) << "</text>\n";
  os << "<text x=\"" << width - margin << "\" y=\"" << height - margin + 16 << "\" font-size=\"11\" text-anchor=\"end\">" << num(xmax)
     << "</text>\n";
  os << "<text x=\"" << margin - 4 << "\" y=\"" << height - margin << "\" font-size=\"11\" text-anchor=\"end\">" << num(ymin) << "</text>\n";
  os << "<text x=\"" << margin - 4 << "\" y=\"" << margin + 10 << "\" font-size=\"11\" text-anchor=\"end\">" << num(ymax) << "</text>\n";

  const std::size_t branches = table.rows.empty() ? 0 : table.rows.front().spectrum.size();
  for (std::size_t k = 0; k < branches; ++k) {
    os << "<polyline fill=\"none\" stroke=\"#1f4e79\" stroke-width=\"1.2\" points=\"";
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
      if (i > 0) os << ' ';
      os << num(px(table.rows[i].driver)) << ',' << num(py(table.rows[i].spectrum.eigenvalues[k].real()));
    }
    os << "\"/>\n";
  }
  for (const auto& row : table.rows)
    for (std::size_t k = 0; k < row.spectrum.size(); ++k)
      if (!row.spectrum.real_flags[k])
        os << "<circle cx=\"" << num(px(row.driver)) << "\" cy=\"" << num(py(row.spectrum.eigenvalues[k].real()))
           << "\" r=\"1.5\" fill=\"#c0392b\"/>\n";
  os << "</svg>\n";
}

inline Json to_json(const VerificationReport& rep) {
  Json j;
  j["model"] = to_string(rep.model);
  Json params = Json::array();
  for (const auto& p : rep.params) params.push_back(p.str());
  j["params"] = params;
  j["n"] = rep.n;
  j["k"] = rep.k;
  j["match"] = rep.match;
  j["dieudonne_residual"] = rep.dieudonne_residual.str();
  Json elems = Json::array();
  for (const auto& e : rep.elements) {
    Json x;
    x["name"] = e.name;
    x["position"] = {e.row, e.col};
    x["expected"] = e.expected.str();
    x["got"] = e.got.str();
    x["match"] = e.match;
    elems.push_back(x);
  }
  j["elements"] = elems;
  Json mism = Json::array();
  for (const auto& m : rep.mismatches) {
    Json x;
    x["position"] = {m.row, m.col};
    x["name"] = m.name;
    x["expected"] = m.expected.str();
    x["got"] = m.got.str();
    mism.push_back(x);
  }
  j["mismatches"] = mism;
  Json ids = Json::array();
  for (const auto& id : rep.identities) {
    Json x;
    x["identity"] = id.name;
    x["lhs"] = id.lhs.str();
    x["rhs"] = id.rhs.str();
    x["holds"] = id.holds;
    ids.push_back(x);
  }
  j["identities"] = ids;
  return j;
}

inline Json to_json(const ReductionReport& rep) {
  Json j;
  j["from"] = to_string(rep.from);
  j["to"] = to_string(rep.to);
  j["condition_met"] = rep.condition_met;
  j["holds"] = rep.holds;
  Json elems = Json::array();
  for (const auto& e : rep.elements) {
    Json x;
    x["name"] = e.name;
    x["expected"] = e.expected.str();
    x["got"] = e.got.str();
    x["match"] = e.match;
    elems.push_back(x);
  }
  j["elements"] = elems;
  return j;
}

inline Json matrix_json(const Eigen::MatrixXd& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json r = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) r.push_back(m(i, c));
    rows.push_back(r);
  }
  return rows;
}

inline Json to_json(const MetricCandidate& m) {
  Json j;
  j["n"] = m.n;
  j["basis_source"] = to_string(m.basis_source);
  j["coefficients"] = m.coefficients;
  j["positivity"] = to_string(m.positivity);
  j["min_eigenvalue"] = m.min_eigenvalue;
  j["theta"] = matrix_json(m.theta);
  return j;
}

inline Json to_json(const DysonFactorization& f) {
  Json j;
  j["sym_residual"] = f.sym_residual;
  j["isospectrality_residual"] = f.isospectrality_residual;
  j["square_residual"] = f.square_residual;
  j["roundtrip_residual"] = f.roundtrip_residual;
  return j;
}

inline Json to_json(const ChargeCandidate& c) {
  Json j;
  j["involution_residual"] = c.involution_residual;
  j["c_matrix"] = matrix_json(c.c_matrix);
  return j;
}

inline Json to_json(const EPLocation& ep) {
  Json j;
  j["driver"] = ep.driver;
  j["bracket"] = {ep.bracket_lo, ep.bracket_hi};
  j["real_count_before"] = ep.real_count_before;
  j["real_count_after"] = ep.real_count_after;
  Json pairs = Json::array();
  for (const auto& [a, b] : ep.colliding_pairs) pairs.push_back({a, b});
  j["colliding_pairs"] = pairs;
  j["gap_at_star"] = ep.gap_at_star;
  return j;
}

}  // namespace ptlat
