#include "euafnet/witness.hpp"

#include <stdexcept>

#include "json.hpp"

namespace euafnet {

WitnessReport construct_witness(const RationalMatrix& w0) {
  if (w0.rows < 1 || w0.cols != w0.rows + 1) {
    throw std::invalid_argument(
        "construct_witness: matrix must be (d-1) x d with d >= 2, got " +
        std::to_string(w0.rows) + " x " + std::to_string(w0.cols));
  }
  WitnessReport rep;
  rep.reduced = rref(w0);
  rep.classes = classify_indices(rep.reduced);
  rep.x.assign(w0.cols, Rational(0));

  const Rational half(1, 2);
  if (rep.classes.coefficients.empty()) {
    // Every pivot variable is forced to zero whatever the free variables do
    // (e.g. the zero matrix).  Any free coordinate works; take the smallest.
    rep.degenerate = true;
    const int k = rep.classes.free_columns.front();
    rep.x[k] = half;
    rep.half_coordinate = k;
  } else {
    // The coefficient list is ordered by (free column, pivot row), so the
    // first strict maximum realizes the tie-breaking rule.
    const CoefficientEntry* best = &rep.classes.coefficients.front();
    for (const CoefficientEntry& e : rep.classes.coefficients) {
      if (abs(e.value) > abs(best->value)) best = &e;
    }
    rep.mu = best->value;
    rep.mu_free_col = best->free_col;
    rep.mu_pivot_row = best->pivot_row;

    const Rational mu = best->value;
    Rational xk;
    if (abs(mu) >= 1) {
      xk = (mu > 0 ? Rational(1) : Rational(-1)) / (2 * abs(mu));
      rep.half_coordinate = best->pivot_col;
    } else {
      xk = half;
      rep.half_coordinate = best->free_col;
    }
    rep.x[best->free_col] = xk;
    for (const CoefficientEntry& e : rep.classes.coefficients) {
      if (e.free_col == best->free_col) {
        rep.x[e.pivot_col] = e.value * xk;
      }
    }
  }

  // Exact self-checks; violations would mean a construction bug.
  for (int r = 0; r < w0.rows; ++r) {
    Rational acc(0);
    for (int c = 0; c < w0.cols; ++c) {
      acc += w0.at(r, c) * rep.x[c];
    }
    if (acc != 0) {
      throw std::logic_error("construct_witness: kernel check failed");
    }
  }
  for (const Rational& v : rep.x) {
    if (abs(v) > half) {
      throw std::logic_error("construct_witness: box check failed");
    }
  }
  if (rep.x[rep.half_coordinate] != half) {
    throw std::logic_error("construct_witness: half-coordinate check failed");
  }
  return rep;
}

std::string witness_report_json(const WitnessReport& report) {
  nlohmann::json doc;
  doc["index_base"] = 1;

  nlohmann::json rows = nlohmann::json::array();
  const RationalMatrix& m = report.reduced.matrix;
  for (int r = 0; r < m.rows; ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (int c = 0; c < m.cols; ++c) {
      row.push_back(to_fraction_string(m.at(r, c)));
    }
    rows.push_back(std::move(row));
  }
  doc["rref"] = std::move(rows);

  auto shift = [](const std::vector<int>& v) {
    nlohmann::json arr = nlohmann::json::array();
    for (int i : v) arr.push_back(i + 1);
    return arr;
  };
  doc["pivot_columns"] = shift(report.reduced.pivot_columns);
  doc["forced_zero"] = shift(report.classes.forced_zero);
  doc["dependent"] = shift(report.classes.dependent);
  doc["free"] = shift(report.classes.free_columns);

  nlohmann::json coeffs = nlohmann::json::array();
  for (const CoefficientEntry& e : report.classes.coefficients) {
    coeffs.push_back({{"pivot", e.pivot_col + 1},
                      {"free", e.free_col + 1},
                      {"value", to_fraction_string(e.value)}});
  }
  doc["coefficients"] = std::move(coeffs);

  doc["degenerate"] = report.degenerate;
  if (report.mu.has_value()) {
    doc["mu"] = to_fraction_string(*report.mu);
    doc["mu_free"] = report.mu_free_col + 1;
  }
  nlohmann::json xs = nlohmann::json::array();
  for (const Rational& v : report.x) {
    xs.push_back(to_fraction_string(v));
  }
  doc["x"] = std::move(xs);
  doc["half_coordinate"] = report.half_coordinate + 1;
  return doc.dump(2);
}

}  // namespace euafnet
