#pragma once

#include <algorithm>
#include <functional>
#include <numeric>
#include <vector>

#include "asymfree/errors.hpp"

namespace asymfree {

// Permutation of {0, ..., m-1} stored as its image list.
class Permutation {
  public:
    explicit Permutation(std::vector<int> images);

    static Permutation identity(int m);

    int size() const { return static_cast<int>(images_.size()); }
    int operator()(int i) const { return images_[static_cast<std::size_t>(i)]; }
    const std::vector<int>& images() const { return images_; }

    // (this . other)(i) = this(other(i))
    Permutation compose(const Permutation& other) const;
    Permutation inverse() const;

    int cycle_count() const;
    // Cycle lengths sorted descending; partitions of m index Weingarten tables.
    std::vector<int> cycle_type() const;
    bool is_identity() const;

    friend bool operator==(const Permutation& a, const Permutation& b) {
        return a.images_ == b.images_;
    }
    friend bool operator<(const Permutation& a, const Permutation& b) {
        return a.images_ < b.images_;
    }

    // Calls fn for every element of S_m in lexicographic order.
    static void for_each(int m, const std::function<void(const Permutation&)>& fn);

  private:
    struct Unchecked {};
    Permutation(std::vector<int> images, Unchecked) : images_(std::move(images)) {}

    std::vector<int> images_;
};

}  // namespace asymfree
