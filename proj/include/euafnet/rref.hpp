#pragma once

#include "euafnet/rational.hpp"

namespace euafnet {

struct RrefResult {
  RationalMatrix matrix;
  std::vector<int> pivot_columns;  // ascending
  int rank() const { return static_cast<int>(pivot_columns.size()); }
};

// Exact reduced row echelon form: leading ones, zeros above and below each
// pivot.  The result is the canonical form, so it is idempotent and
// invariant under nonzero row scaling of the input.
RrefResult rref(const RationalMatrix& m);

struct CoefficientEntry {
  int pivot_col = -1;
  int pivot_row = -1;
  int free_col = -1;
  Rational value;  // minus the reduced-matrix entry at (pivot_row, free_col)
};

// Splits the columns of a reduced matrix into three groups: pivot columns
// whose row touches no free column (their variable is forced to zero in any
// kernel vector), pivot columns that depend on at least one free column, and
// the free columns themselves.  Coefficients are listed in (free column,
// pivot row) order.
struct IndexClassification {
  std::vector<int> forced_zero;
  std::vector<int> dependent;
  std::vector<int> free_columns;
  std::vector<CoefficientEntry> coefficients;
};

IndexClassification classify_indices(const RrefResult& reduced);

}  // namespace euafnet
