#pragma once

// Closed-form pseudometric elements for the one-, two- and three-parameter
// square wells, their display layouts, and exact verification against the
// banded Dieudonne solution.
//
//   one_param   (n = 11, k = 6, couplings [lambda, lambda])
//   two_param   (n = 11, k = 6, couplings [lambda, mu])
//   three_param (n = 13, k = 7, couplings [lambda, mu, nu])

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ptlat/dieudonne.hpp"
#include "ptlat/errors.hpp"
#include "ptlat/lattice.hpp"
#include "ptlat/rational.hpp"

namespace ptlat {

enum class FormulaModel { one_param, two_param, three_param };

inline std::string to_string(FormulaModel m) {
  switch (m) {
    case FormulaModel::one_param: return "one";
    case FormulaModel::two_param: return "two";
    case FormulaModel::three_param: return "three";
  }
  return "unknown";
}

inline FormulaModel parse_formula_model(std::string_view s) {
  if (s == "one" || s == "one_param") return FormulaModel::one_param;
  if (s == "two" || s == "two_param") return FormulaModel::two_param;
  if (s == "three" || s == "three_param") return FormulaModel::three_param;
  throw std::invalid_argument("unknown model '" + std::string(s) + "' (expected one, two or three)");
}

inline std::size_t parameter_count(FormulaModel m) {
  switch (m) {
    case FormulaModel::one_param: return 1;
    case FormulaModel::two_param: return 2;
    case FormulaModel::three_param: return 3;
  }
  return 0;
}

template <class T>
struct FormulaElements {
  FormulaModel model = FormulaModel::one_param;
  std::vector<std::pair<std::string, T>> values;  // display order

  const T& operator[](std::string_view name) const {
    for (const auto& [k, v] : values)
      if (k == name) return v;
    throw std::out_of_range("no element named '" + std::string(name) + "'");
  }
  bool contains(std::string_view name) const {
    for (const auto& kv : values)
      if (kv.first == name) return true;
    return false;
  }
};

/// Exact evaluation of the closed forms. Parameters: (lambda), (lambda, mu) or (lambda, mu, nu).
template <class T>
FormulaElements<T> formula_elements(FormulaModel model, std::span<const T> params) {
  if (params.size() != parameter_count(model))
    throw std::invalid_argument("model " + to_string(model) + " takes " + std::to_string(parameter_count(model)) + " parameter(s)");
  const T one(1);
  FormulaElements<T> f;
  f.model = model;
  switch (model) {
    case FormulaModel::one_param: {
      const T& l = params[0];
      const T den = one + T(3) * l * l;
      f.values = {{"r", T((one - l * l) / den)},
                  {"s", T((one + l) / den)},
                  {"v", T(one / den)},
                  {"t", T((one + l * l) / den)},
                  {"w", T((one + T(2) * l * l) / den)}};
      break;
    }
    case FormulaModel::two_param: {
      const T& l = params[0];
      const T& m = params[1];
      const T den = one + l * l + T(2) * m * m;
      f.values = {{"r", T((one + m) * (one - l) / den)},
                  {"s", T((one + m) / den)},
                  {"v", T(one / den)},
                  {"t", T((one + l * l) / den)},
                  {"w", T((one + l * l + m * m) / den)}};
      break;
    }
    case FormulaModel::three_param: {
      const T& l = params[0];
      const T& m = params[1];
      const T& nu = params[2];
      const T den = one + l * l + T(2) * m * m + T(3) * nu * nu + nu * nu * l * l;
      f.values = {{"r", T((one - nu) * (one + m) * (one - l) / den)},
                  {"s", T((one - nu) * (one + m) / den)},
                  {"p", T((one - nu) / den)},
                  {"v", T(one / den)},
                  {"t", T((one - nu) * (one + l * l) / den)},
                  {"q", T((one + m * m + l * l) / den)},
                  {"w", T((one + m * m + nu * nu + l * l) / den)},
                  {"m", T(one - T(2) * nu * nu / den)},
                  {"u", T(one - nu * nu / den)}};
      break;
    }
  }
  return f;
}

template <class T>
FormulaElements<T> formula_elements(FormulaModel model, const std::vector<T>& params) {
  return formula_elements(model, std::span<const T>(params));
}

/// Dimension, band and coupling depth of the displayed matrices.
struct DisplayLayout {
  std::size_t n = 0;
  std::size_t k = 0;
  std::size_t depth = 0;
  std::vector<std::string> top_rows;  // rows 1..(n+1)/2, whitespace-separated; "." = structural zero
};

inline const DisplayLayout& display_layout(FormulaModel model) {
  static const DisplayLayout eleven{11, 6, 2,
                                    {". . . . . r . . . . .",
                                     ". . . . s . s . . . .",
                                     ". . . v . t . v . . .",
                                     ". . v . w . w . v . .",
                                     ". s . w . 1 . w . s .",
                                     "r . t . 1 . 1 . t . r"}};
  static const DisplayLayout thirteen{13, 7, 3,
                                      {". . . . . . r . . . . . .",
                                       ". . . . . s . s . . . . .",
                                       ". . . . p . t . p . . . .",
                                       ". . . v . q . q . v . . .",
                                       ". . p . w . m . w . p . .",
                                       ". s . q . u . u . q . s .",
                                       "r . t . m . 1 . m . t . r"}};
  return model == FormulaModel::three_param ? thirteen : eleven;
}

/// Element name at every nonzero position of the displayed matrix (0-based);
/// the lower half follows from centrosymmetry.
inline std::map<Position, std::string> layout_names(const DisplayLayout& layout) {
  std::map<Position, std::string> out;
  const std::size_t n = layout.n;
  for (std::size_t i = 0; i < layout.top_rows.size(); ++i) {
    std::size_t j = 0;
    std::size_t pos = 0;
    const std::string& row = layout.top_rows[i];
    while (pos < row.size()) {
      while (pos < row.size() && row[pos] == ' ') ++pos;
      if (pos >= row.size()) break;
      std::size_t end = row.find(' ', pos);
      if (end == std::string::npos) end = row.size();
      const std::string tok = row.substr(pos, end - pos);
      if (tok != ".") {
        out[{i, j}] = tok;
        out[{n - 1 - i, n - 1 - j}] = tok;
      }
      ++j;
      pos = end;
    }
  }
  return out;
}

/// Coupling vector realizing a formula model.
template <class T>
CouplingVector<T> model_couplings(FormulaModel model, const std::vector<T>& params) {
  if (params.size() != parameter_count(model)) throw std::invalid_argument("wrong number of model parameters");
  switch (model) {
    case FormulaModel::one_param: return CouplingVector<T>({params[0], params[0]});
    case FormulaModel::two_param: return CouplingVector<T>({params[0], params[1]});
    case FormulaModel::three_param: return CouplingVector<T>({params[0], params[1], params[2]});
  }
  throw std::logic_error("unreachable");
}

struct ElementCheck {
  std::string name;
  std::size_t row = 0;  // 1-based position of the first occurrence
  std::size_t col = 0;
  Rational expected;
  Rational got;
  bool match = false;
};

struct PositionMismatch {
  std::size_t row = 0;  // 1-based
  std::size_t col = 0;
  std::string name;
  Rational expected;
  Rational got;
};

struct IdentityCheck {
  std::string name;  // e.g. "s*(1-lambda) = r"
  Rational lhs;
  Rational rhs;
  bool holds = false;
};

struct VerificationReport {
  FormulaModel model = FormulaModel::one_param;
  std::vector<Rational> params;
  std::size_t n = 0;
  std::size_t k = 0;
  bool match = false;
  std::vector<ElementCheck> elements;
  std::vector<PositionMismatch> mismatches;
  std::vector<IdentityCheck> identities;
  Rational dieudonne_residual;

  void require_match() const {
    if (!mismatches.empty()) {
      const auto& m = mismatches.front();
      throw Mismatch(m.row, m.col, m.got.str(), m.expected.str());
    }
    for (const auto& id : identities)
      if (!id.holds) throw Mismatch(0, 0, id.lhs.str(), id.rhs.str());
  }
};

/// Solves the banded ansatz exactly and compares every nonzero entry with the
/// closed forms. For the one-parameter model the identities s(1-lambda) = r
/// and v(1+lambda) = s are also checked on the solved values.
inline VerificationReport verify_formulas(FormulaModel model, const std::vector<Rational>& params) {
  const DisplayLayout& layout = display_layout(model);
  const auto h = build_hamiltonian(layout.n, model_couplings(model, params));
  const Pseudometric<Rational> p = banded_pseudometric(h, layout.k);
  const auto expected = formula_elements(model, params);
  const auto names = layout_names(layout);

  VerificationReport rep;
  rep.model = model;
  rep.params = params;
  rep.n = layout.n;
  rep.k = layout.k;
  rep.dieudonne_residual = residual(h, p);

  auto expected_value = [&](const std::string& name) { return name == "1" ? Rational(1) : expected[name]; };

  for (Eigen::Index i = 0; i < p.entries.rows(); ++i) {
    for (Eigen::Index j = 0; j < p.entries.cols(); ++j) {
      const Position pos{static_cast<std::size_t>(i), static_cast<std::size_t>(j)};
      const auto it = names.find(pos);
      const Rational want = it == names.end() ? Rational(0) : expected_value(it->second);
      const Rational& got = p.entries(i, j);
      if (got != want)
        rep.mismatches.push_back({pos.first + 1, pos.second + 1, it == names.end() ? std::string("0") : it->second, want, got});
    }
  }

  for (const auto& [name, value] : expected.values) {
    for (const auto& [pos, nm] : names) {
      if (nm != name) continue;
      const Rational& got = p.entries(static_cast<Eigen::Index>(pos.first), static_cast<Eigen::Index>(pos.second));
      rep.elements.push_back({name, pos.first + 1, pos.second + 1, value, got, got == value});
      break;
    }
  }

  if (model == FormulaModel::one_param) {
    auto got = [&](const std::string& name) {
      for (const auto& e : rep.elements)
        if (e.name == name) return e.got;
      throw std::logic_error("element missing from layout");
    };
    const Rational& l = params[0];
    const Rational lhs1 = got("s") * (Rational(1) - l);
    const Rational lhs2 = got("v") * (Rational(1) + l);
    rep.identities.push_back({"s*(1-lambda) = r", lhs1, got("r"), lhs1 == got("r")});
    rep.identities.push_back({"v*(1+lambda) = s", lhs2, got("s"), lhs2 == got("s")});
  }

  bool ok = rep.mismatches.empty() && rep.dieudonne_residual.is_zero();
  for (const auto& id : rep.identities) ok = ok && id.holds;
  rep.match = ok;
  return rep;
}

/// As above, checking that (n, k) is the layout of `model`.
inline VerificationReport verify_formulas(FormulaModel model, const std::vector<Rational>& params, std::size_t n, std::size_t k) {
  const DisplayLayout& layout = display_layout(model);
  if (n != layout.n || k != layout.k)
    throw std::invalid_argument("model " + to_string(model) + " is displayed at n = " + std::to_string(layout.n) + ", k = " + std::to_string(layout.k));
  return verify_formulas(model, params);
}

struct ReductionReport {
  FormulaModel from = FormulaModel::two_param;
  FormulaModel to = FormulaModel::one_param;
  std::vector<Rational> params;          // parameters of `from`
  std::vector<Rational> reduced_params;  // parameters handed to `to`
  std::vector<ElementCheck> elements;    // common element names; expected = `to`, got = `from`
  bool condition_met = false;            // mu = lambda (two -> one) or nu = 0 (three -> two)
  bool holds = false;
};

/// Exact check that the closed forms of `from` collapse onto those of `to`:
/// two_param(lambda, lambda) = one_param(lambda) and
/// three_param(lambda, mu, 0) = two_param(lambda, mu) on the shared names.
inline ReductionReport reduction_identity(FormulaModel from, const std::vector<Rational>& params, FormulaModel to) {
  ReductionReport rep;
  rep.from = from;
  rep.to = to;
  rep.params = params;
  if (from == FormulaModel::two_param && to == FormulaModel::one_param) {
    rep.condition_met = params.at(1) == params.at(0);
    rep.reduced_params = {params.at(0)};
  } else if (from == FormulaModel::three_param && to == FormulaModel::two_param) {
    rep.condition_met = params.at(2).is_zero();
    rep.reduced_params = {params.at(0), params.at(1)};
  } else if (from == FormulaModel::three_param && to == FormulaModel::one_param) {
    rep.condition_met = params.at(2).is_zero() && params.at(1) == params.at(0);
    rep.reduced_params = {params.at(0)};
  } else {
    throw std::invalid_argument("model " + to_string(from) + " does not reduce to model " + to_string(to));
  }
  const auto hi = formula_elements(from, params);
  const auto lo = formula_elements(to, rep.reduced_params);
  bool ok = true;
  for (const auto& [name, value] : lo.values) {
    if (!hi.contains(name)) continue;
    const bool eq = hi[name] == value;
    rep.elements.push_back({name, 0, 0, value, hi[name], eq});
    ok = ok && eq;
  }
  rep.holds = ok;
  return rep;
}

}  // namespace ptlat
