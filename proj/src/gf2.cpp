#include "twrde/gf2.hpp"

#include <algorithm>
#include <bit>

#include "twrde/error.hpp"

namespace twrde {

void Gf2Vec::xor_with(const Gf2Vec& o) {
    for (std::size_t i = 0; i < w_.size(); ++i) w_[i] ^= o.w_[i];
}

std::size_t Gf2Vec::popcount() const {
    std::size_t c = 0;
    for (std::uint64_t w : w_) c += std::size_t(std::popcount(w));
    return c;
}

void Gf2Matrix::xor_rows(std::size_t dst, std::size_t src, std::size_t from) {
    std::uint64_t* d = row(dst);
    const std::uint64_t* s = row(src);
    for (std::size_t w = from; w < words_; ++w) d[w] ^= s[w];
}

void Gf2Matrix::swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    std::swap_ranges(row(a), row(a) + words_, row(b));
}

namespace {

void xor_from(std::uint64_t* dst, const std::uint64_t* src, std::size_t count) {
    for (std::size_t w = 0; w < count; ++w) dst[w] ^= src[w];
}

}  // namespace

EchelonForm echelon_form(Gf2Matrix m, int block) {
    if (block < 1 || block > 16) throw Error("invalid-argument", "block must be in [1, 16]");
    const std::size_t rows = m.rows(), cols = m.cols(), words = m.words();

    EchelonForm ef;
    std::vector<bool> is_pivot_col(cols, false);
    std::size_t r = 0, c = 0;
    std::vector<std::uint64_t> table;
    std::vector<std::uint32_t> block_cols;

    while (r < rows && c < cols) {
        std::size_t c_end = std::min(cols, c + std::size_t(block));
        std::size_t word0 = c >> 6;
        block_cols.clear();

        // Pivot search: candidates are lazily reduced against the pivots
        // already found in this block before their bit is trusted.
        for (std::size_t cc = c; cc < c_end; ++cc) {
            std::size_t base = r + block_cols.size();
            bool found = false;
            for (std::size_t rr = base; rr < rows && !found; ++rr) {
                for (std::size_t t = 0; t < block_cols.size(); ++t)
                    if (m.get(rr, block_cols[t])) m.xor_rows(rr, r + t, word0);
                if (m.get(rr, cc)) {
                    m.swap_rows(rr, base);
                    block_cols.push_back(std::uint32_t(cc));
                    found = true;
                }
            }
        }
        std::size_t npiv = block_cols.size();
        if (npiv == 0) {
            c = c_end;
            continue;
        }

        // Pivot rows mutually reduced, so a row's bits at the pivot columns
        // index the table entry that clears all of them at once.
        for (std::size_t t = 0; t < npiv; ++t)
            for (std::size_t t2 = 0; t2 < npiv; ++t2)
                if (t2 != t && m.get(r + t2, block_cols[t])) m.xor_rows(r + t2, r + t, word0);

        std::size_t wlen = words - word0;
        table.assign((std::size_t(1) << npiv) * wlen, 0);
        for (std::size_t g = 1; g < (std::size_t(1) << npiv); ++g) {
            std::size_t prev = g & (g - 1);  // gray-style: differs from g by lowest set bit
            std::size_t bit = std::size_t(std::countr_zero(g));
            std::copy(table.data() + prev * wlen, table.data() + (prev + 1) * wlen,
                      table.data() + g * wlen);
            xor_from(table.data() + g * wlen, m.row(r + bit) + word0, wlen);
        }

        for (std::size_t rr = r + npiv; rr < rows; ++rr) {
            std::size_t mask = 0;
            for (std::size_t t = 0; t < npiv; ++t)
                mask |= std::size_t(m.get(rr, block_cols[t])) << t;
            if (mask) xor_from(m.row(rr) + word0, table.data() + mask * wlen, wlen);
        }

        for (std::size_t t = 0; t < npiv; ++t) {
            ef.pivot_cols.push_back(block_cols[t]);
            is_pivot_col[block_cols[t]] = true;
        }
        r += npiv;

        // Table entries can resurrect a block column that had no pivot; give
        // those another plain pass.
        for (std::size_t cc = c; cc < c_end && r < rows; ++cc) {
            if (is_pivot_col[cc]) continue;
            for (std::size_t rr = r; rr < rows; ++rr) {
                if (!m.get(rr, cc)) continue;
                m.swap_rows(rr, r);
                for (std::size_t r2 = r + 1; r2 < rows; ++r2)
                    if (m.get(r2, cc)) m.xor_rows(r2, r, word0);
                ef.pivot_cols.push_back(std::uint32_t(cc));
                is_pivot_col[cc] = true;
                ++r;
                break;
            }
        }
        c = c_end;
    }

    ef.rank = ef.pivot_cols.size();
    for (std::size_t col = 0; col < cols; ++col)
        if (!is_pivot_col[col]) ef.free_cols.push_back(std::uint32_t(col));
    ef.mat = std::move(m);
    return ef;
}

std::size_t gf2_rank(const Gf2Matrix& m) { return echelon_form(m).rank; }

namespace {

// Rows processed bottom-up; each pivot's value is the parity of its row
// against the columns assigned so far (later pivots and free columns).
Gf2Vec back_substitute(const EchelonForm& ef, Gf2Vec x) {
    for (std::size_t r = ef.rank; r-- > 0;) {
        const std::uint64_t* row = ef.mat.row(r);
        std::uint64_t par = 0;
        for (std::size_t w = 0; w < x.word_count(); ++w) par ^= row[w] & x.words()[w];
        x.set(ef.pivot_cols[r], std::popcount(par) & 1);
    }
    return x;
}

}  // namespace

Gf2Vec sample_nullspace(const EchelonForm& ef, Rng& rng) {
    Gf2Vec x(ef.mat.cols());
    for (std::uint32_t f : ef.free_cols) x.set(f, rng.next_bit());
    return back_substitute(ef, std::move(x));
}

std::vector<Gf2Vec> nullspace_basis(const EchelonForm& ef, std::size_t max_dim) {
    if (ef.free_cols.size() > max_dim)
        throw Error("dimension-too-large", "null space dimension exceeds " +
                                               std::to_string(max_dim));
    std::vector<Gf2Vec> basis;
    for (std::uint32_t f : ef.free_cols) {
        Gf2Vec x(ef.mat.cols());
        x.set(f, true);
        basis.push_back(back_substitute(ef, std::move(x)));
    }
    return basis;
}

bool in_nullspace(const Gf2Matrix& m, const Gf2Vec& v) {
    for (std::size_t r = 0; r < m.rows(); ++r) {
        const std::uint64_t* row = m.row(r);
        std::uint64_t par = 0;
        for (std::size_t w = 0; w < v.word_count(); ++w) par ^= row[w] & v.words()[w];
        if (std::popcount(par) & 1) return false;
    }
    return true;
}

}  // namespace twrde
