#pragma once

#include <cstdint>
#include <vector>

#include "twrde/rng.hpp"

namespace twrde {

class Gf2Vec {
public:
    Gf2Vec() = default;
    explicit Gf2Vec(std::size_t n) : n_(n), w_((n + 63) / 64, 0) {}

    std::size_t size() const { return n_; }
    bool get(std::size_t i) const { return (w_[i >> 6] >> (i & 63)) & 1u; }
    void set(std::size_t i, bool v) {
        std::uint64_t m = std::uint64_t(1) << (i & 63);
        if (v)
            w_[i >> 6] |= m;
        else
            w_[i >> 6] &= ~m;
    }
    void flip(std::size_t i) { w_[i >> 6] ^= std::uint64_t(1) << (i & 63); }
    void xor_with(const Gf2Vec& o);
    std::size_t popcount() const;
    bool operator==(const Gf2Vec& o) const { return n_ == o.n_ && w_ == o.w_; }
    const std::uint64_t* words() const { return w_.data(); }
    std::size_t word_count() const { return w_.size(); }

private:
    std::size_t n_ = 0;
    std::vector<std::uint64_t> w_;
};

// Dense bit matrix, row-major 64-bit words.
class Gf2Matrix {
public:
    Gf2Matrix() = default;
    Gf2Matrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), words_((cols + 63) / 64), bits_(rows * words_, 0) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t words() const { return words_; }
    std::uint64_t* row(std::size_t r) { return bits_.data() + r * words_; }
    const std::uint64_t* row(std::size_t r) const { return bits_.data() + r * words_; }
    bool get(std::size_t r, std::size_t c) const { return (row(r)[c >> 6] >> (c & 63)) & 1u; }
    void flip(std::size_t r, std::size_t c) { row(r)[c >> 6] ^= std::uint64_t(1) << (c & 63); }
    void set(std::size_t r, std::size_t c, bool v) {
        if (get(r, c) != v) flip(r, c);
    }
    // row[dst] ^= row[src], starting at word `from` (earlier words known equal or zero)
    void xor_rows(std::size_t dst, std::size_t src, std::size_t from = 0);
    void swap_rows(std::size_t a, std::size_t b);

private:
    std::size_t rows_ = 0, cols_ = 0, words_ = 0;
    std::vector<std::uint64_t> bits_;
};

// Row-echelon decomposition; pivot r sits at (r, pivot_cols[r]) and each pivot
// row is clean at every earlier pivot column, which is what back-substitution
// needs.  Column order of pivots is mostly but not necessarily monotone.
struct EchelonForm {
    Gf2Matrix mat;
    std::vector<std::uint32_t> pivot_cols;
    std::vector<std::uint32_t> free_cols;
    std::size_t rank = 0;
};

// Forward elimination with blocked table lookups (Method of Four Russians);
// block = 1 degrades to plain Gaussian elimination.
EchelonForm echelon_form(Gf2Matrix m, int block = 8);

std::size_t gf2_rank(const Gf2Matrix& m);

// Uniform draw from the null space: free columns get fair coin flips, pivots
// follow by back-substitution.
Gf2Vec sample_nullspace(const EchelonForm& ef, Rng& rng);

// Explicit basis, one vector per free column; Error("dimension-too-large")
// beyond max_dim since callers enumerate 2^dim combinations.
std::vector<Gf2Vec> nullspace_basis(const EchelonForm& ef, std::size_t max_dim = 20);

bool in_nullspace(const Gf2Matrix& m, const Gf2Vec& v);

}  // namespace twrde
