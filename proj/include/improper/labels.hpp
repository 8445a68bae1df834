#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace improper {

enum class LabelKind { binary, bounded_integers, real_interval };

// Outcome space. Three shapes cover the supported models: {-1,+1},
// integers 0..y_max, and a real interval. diameter() is max{y} for the
// integer and binary sets.
class LabelSet {
 public:
  static LabelSet binary() { return LabelSet(LabelKind::binary, -1.0, 1.0); }

  static LabelSet bounded_integers(int y_max) {
    if (y_max < 0) throw std::invalid_argument("y_max must be >= 0");
    return LabelSet(LabelKind::bounded_integers, 0.0, static_cast<double>(y_max));
  }

  static LabelSet real_interval(double lo, double hi) {
    if (!(lo <= hi)) throw std::invalid_argument("empty label interval");
    return LabelSet(LabelKind::real_interval, lo, hi);
  }

  LabelKind kind() const { return kind_; }
  double min_label() const { return lo_; }
  double max_label() const { return hi_; }
  double diameter() const { return hi_; }

  bool contains(double y) const {
    switch (kind_) {
      case LabelKind::binary:
        return y == -1.0 || y == 1.0;
      case LabelKind::bounded_integers:
        return y >= 0.0 && y <= hi_ && y == static_cast<double>(static_cast<long long>(y));
      case LabelKind::real_interval:
        return y >= lo_ && y <= hi_;
    }
    return false;
  }

  // Finite label candidates used by grid searches: every label for the
  // discrete sets, n_continuous equispaced points for an interval.
  std::vector<double> candidates(int n_continuous = 101) const {
    std::vector<double> out;
    switch (kind_) {
      case LabelKind::binary:
        out = {-1.0, 1.0};
        break;
      case LabelKind::bounded_integers:
        for (long long v = 0; v <= static_cast<long long>(hi_); ++v)
          out.push_back(static_cast<double>(v));
        break;
      case LabelKind::real_interval:
        if (n_continuous < 2 || lo_ == hi_) {
          out = {lo_};
        } else {
          for (int i = 0; i < n_continuous; ++i)
            out.push_back(lo_ + (hi_ - lo_) * i / (n_continuous - 1));
        }
        break;
    }
    return out;
  }

  bool operator==(const LabelSet& o) const {
    return kind_ == o.kind_ && lo_ == o.lo_ && hi_ == o.hi_;
  }

 private:
  LabelSet(LabelKind kind, double lo, double hi) : kind_(kind), lo_(lo), hi_(hi) {}

  LabelKind kind_;
  double lo_, hi_;
};

}  // namespace improper
