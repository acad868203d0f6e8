#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <vector>

#include "cellmech/errors.hpp"
#include "cellmech/threads.hpp"

namespace cellmech {

// Compressed sparse row matrix. Column indices are strictly increasing per row
// and no explicit zeros are stored after finalize.
struct Csr {
  int rows = 0;
  int cols = 0;
  std::vector<int> rowptr;
  std::vector<int> colind;
  std::vector<double> vals;
  bool symmetric = false;
  bool spd = false;

  void matvec(std::span<const double> x, std::span<double> y) const {
    auto kernel = [&](int r0, int r1) {
      for (int r = r0; r < r1; ++r) {
        double s = 0.0;
        for (int k = rowptr[r]; k < rowptr[r + 1]; ++k) s += vals[k] * x[colind[k]];
        y[r] = s;
      }
    };
    // per-row dot products are sequential, so the result is identical for any thread count
    parallel_rows(rows, kernel);
  }

  [[nodiscard]] std::vector<double> diagonal() const {
    std::vector<double> d(rows, 0.0);
    for (int r = 0; r < rows; ++r)
      for (int k = rowptr[r]; k < rowptr[r + 1]; ++k)
        if (colind[k] == r) d[r] = vals[k];
    return d;
  }

  // y = alpha*A*x + y
  void matvec_add(std::span<const double> x, std::span<double> y, double alpha = 1.0) const {
    auto kernel = [&](int r0, int r1) {
      for (int r = r0; r < r1; ++r) {
        double s = 0.0;
        for (int k = rowptr[r]; k < rowptr[r + 1]; ++k) s += vals[k] * x[colind[k]];
        y[r] += alpha * s;
      }
    };
    parallel_rows(rows, kernel);
  }
};

// Triplet accumulator; duplicate entries are summed on build.
class CooBuilder {
 public:
  CooBuilder(int rows, int cols) : rows_(rows), cols_(cols) {}

  void add(int r, int c, double v) { trip_.push_back({r, c, v}); }

  [[nodiscard]] Csr build(bool symmetric = false, bool spd = false) {
    std::sort(trip_.begin(), trip_.end(), [](const Trip& a, const Trip& b) {
      return a.r != b.r ? a.r < b.r : a.c < b.c;
    });
    Csr m;
    m.rows = rows_;
    m.cols = cols_;
    m.symmetric = symmetric;
    m.spd = spd;
    m.rowptr.assign(rows_ + 1, 0);
    std::size_t i = 0;
    for (int r = 0; r < rows_; ++r) {
      while (i < trip_.size() && trip_[i].r == r) {
        int c = trip_[i].c;
        double v = 0.0;
        while (i < trip_.size() && trip_[i].r == r && trip_[i].c == c) v += trip_[i++].v;
        if (v != 0.0) {
          m.colind.push_back(c);
          m.vals.push_back(v);
        }
      }
      m.rowptr[r + 1] = static_cast<int>(m.colind.size());
    }
    return m;
  }

 private:
  struct Trip {
    int r, c;
    double v;
  };
  int rows_, cols_;
  std::vector<Trip> trip_;
};

}  // namespace cellmech
