#include "twrde/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include <cmath>

#include "twrde/mathx.hpp"

// Four-lane double-precision exp/log in the Cephes style.  Accuracy is a few
// ulp, which the scalar/SIMD equivalence tests bound explicitly; the tail of
// each kernel falls back to the scalar formulas.

namespace twrde::kern {

namespace {

inline __m256d vset(double v) { return _mm256_set1_pd(v); }

inline __m256d fma(__m256d a, __m256d b, __m256d c) { return _mm256_fmadd_pd(a, b, c); }

// 2^n for integral-valued n in [-1022, 1023], built in the exponent field.
inline __m256d pow2i(__m256d n) {
    __m128i ni = _mm256_cvtpd_epi32(n);
    __m256i wide = _mm256_cvtepi32_epi64(ni);
    __m256i bits = _mm256_slli_epi64(_mm256_add_epi64(wide, _mm256_set1_epi64x(1023)), 52);
    return _mm256_castsi256_pd(bits);
}

const __m256d kExpC1 = vset(6.93145751953125e-1);
const __m256d kExpC2 = vset(1.42860682030941723212e-6);
const __m256d kLog2e = vset(1.4426950408889634073599);
const __m256d kExpLo = vset(-708.39641853226410622);
const __m256d kExpHi = vset(709.43613930310391424);

// e^r - 1 for |r| <= ln2/2, rational P/Q from the Cephes exp kernel.
inline __m256d exp_reduced_m1(__m256d r) {
    __m256d rr = _mm256_mul_pd(r, r);
    __m256d p = fma(vset(1.26177193074810590878e-4), rr, vset(3.02994407707441961300e-2));
    p = fma(p, rr, vset(9.99999999999999999910e-1));
    p = _mm256_mul_pd(p, r);
    __m256d q = fma(vset(3.00198505138664455042e-6), rr, vset(2.52448340349684104192e-3));
    q = fma(q, rr, vset(2.27265548208155028766e-1));
    q = fma(q, rr, vset(2.00000000000000000005e0));
    return _mm256_div_pd(_mm256_add_pd(p, p), _mm256_sub_pd(q, p));
}

inline void reduce_exp(__m256d x, __m256d& r, __m256d& n) {
    x = _mm256_min_pd(_mm256_max_pd(x, kExpLo), kExpHi);
    n = _mm256_round_pd(_mm256_mul_pd(x, kLog2e), _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
    r = _mm256_sub_pd(x, _mm256_mul_pd(n, kExpC1));
    r = _mm256_sub_pd(r, _mm256_mul_pd(n, kExpC2));
}

inline __m256d exp_pd(__m256d x) {
    __m256d r, n;
    reduce_exp(x, r, n);
    __m256d e = _mm256_add_pd(exp_reduced_m1(r), vset(1.0));
    return _mm256_mul_pd(e, pow2i(n));
}

inline __m256d expm1_pd(__m256d x) {
    __m256d r, n;
    reduce_exp(x, r, n);
    __m256d f = exp_reduced_m1(r);
    __m256d s = pow2i(n);
    // 2^n (1 + f) - 1; exact at n = 0 so tanh stays accurate near zero
    return fma(s, f, _mm256_sub_pd(s, vset(1.0)));
}

const __m256d kSqrtHalf = vset(0.70710678118654752440);

// Cephes log: x = m 2^e with m in [sqrt(1/2), sqrt(2)), log(1+z) rational in z = m-1.
inline __m256d log_pd(__m256d x) {
    __m256i bits = _mm256_castpd_si256(x);
    __m256i expfield = _mm256_srli_epi64(bits, 52);
    __m256d e = _mm256_cvtepi32_pd(_mm256_castsi256_si128(
        _mm256_permutevar8x32_epi32(_mm256_sub_epi64(expfield, _mm256_set1_epi64x(1022)),
                                    _mm256_setr_epi32(0, 2, 4, 6, 0, 0, 0, 0))));
    __m256i mbits = _mm256_or_si256(
        _mm256_and_si256(bits, _mm256_set1_epi64x(0x800FFFFFFFFFFFFFLL)),
        _mm256_set1_epi64x(0x3FE0000000000000LL));
    __m256d m = _mm256_castsi256_pd(mbits);
    __m256d small = _mm256_cmp_pd(m, kSqrtHalf, _CMP_LT_OQ);
    m = _mm256_blendv_pd(m, _mm256_add_pd(m, m), small);
    e = _mm256_sub_pd(e, _mm256_and_pd(small, vset(1.0)));

    __m256d z = _mm256_sub_pd(m, vset(1.0));
    __m256d zz = _mm256_mul_pd(z, z);
    __m256d p = fma(vset(1.01875663804580931796e-4), z, vset(4.97494994976747001425e-1));
    p = fma(p, z, vset(4.70579119878881725854e0));
    p = fma(p, z, vset(1.44989225341610930846e1));
    p = fma(p, z, vset(1.79368678507819816313e1));
    p = fma(p, z, vset(7.70838733755885391666e0));
    __m256d q = _mm256_add_pd(z, vset(1.12873587189167450590e1));
    q = fma(q, z, vset(4.52279145837532221105e1));
    q = fma(q, z, vset(8.29875266912776603211e1));
    q = fma(q, z, vset(7.11544750618563894466e1));
    q = fma(q, z, vset(2.31251620126765340583e1));

    __m256d y = _mm256_mul_pd(_mm256_mul_pd(z, zz), _mm256_div_pd(p, q));
    y = fma(e, vset(-2.121944400546905827679e-4), y);
    y = _mm256_sub_pd(y, _mm256_mul_pd(vset(0.5), zz));
    __m256d r = _mm256_add_pd(z, y);
    return fma(e, vset(0.693359375), r);
}

// log1p via log(u) x / (u - 1); the u == 1 lanes keep x itself.
inline __m256d log1p_pd(__m256d x) {
    __m256d u = _mm256_add_pd(x, vset(1.0));
    __m256d d = _mm256_sub_pd(u, vset(1.0));
    __m256d corr = _mm256_mul_pd(log_pd(u), _mm256_div_pd(x, d));
    __m256d exact = _mm256_cmp_pd(d, _mm256_setzero_pd(), _CMP_EQ_OQ);
    return _mm256_blendv_pd(corr, x, exact);
}

void tanh_half_v(const double* x, double* out, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d t = expm1_pd(_mm256_loadu_pd(x + i));
        _mm256_storeu_pd(out + i, _mm256_div_pd(t, _mm256_add_pd(t, vset(2.0))));
    }
    for (; i < n; ++i) out[i] = std::tanh(0.5 * x[i]);
}

void atanh2_clip_v(const double* p, double* out, std::size_t n, double bound) {
    const __m256d guard = vset(1.0 - kAtanhGuard);
    const __m256d bnd = vset(bound);
    const __m256d sign_mask = vset(-0.0);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d v = _mm256_loadu_pd(p + i);
        v = _mm256_min_pd(_mm256_max_pd(v, _mm256_sub_pd(_mm256_setzero_pd(), guard)), guard);
        // Odd function: work on |v| so 1-|v| stays exact (Sterbenz) instead of
        // rounding at the binade edge near 2, then restore the sign bit.
        __m256d sgn = _mm256_and_pd(v, sign_mask);
        __m256d a = _mm256_andnot_pd(sign_mask, v);
        // 2 atanh(a) = log1p(2a / (1-a))
        __m256d r = log1p_pd(_mm256_div_pd(_mm256_add_pd(a, a), _mm256_sub_pd(vset(1.0), a)));
        r = _mm256_min_pd(r, bnd);
        r = _mm256_or_pd(r, sgn);
        _mm256_storeu_pd(out + i, r);
    }
    for (; i < n; ++i) out[i] = atanh2_clipped(p[i], bound);
}

void llr_map_v(const double* y, double* out, std::size_t n, double c) {
    const __m256d vc = vset(c);
    const __m256d sign_mask = vset(-0.0);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d a = _mm256_andnot_pd(sign_mask, _mm256_mul_pd(_mm256_loadu_pd(y + i), vc));
        __m256d t = exp_pd(_mm256_mul_pd(a, vset(-2.0)));
        __m256d lnch = _mm256_sub_pd(_mm256_add_pd(a, log1p_pd(t)), vset(kLn2));
        _mm256_storeu_pd(out + i, _mm256_sub_pd(lnch, vc));
    }
    for (; i < n; ++i) out[i] = lncosh(c * y[i]) - c;
}

void gather_mul_v(const double* tab, const std::uint32_t* idx, double* acc, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m128i iv = _mm_loadu_si128(reinterpret_cast<const __m128i*>(idx + i));
        __m256d v = _mm256_i32gather_pd(tab, iv, 8);
        _mm256_storeu_pd(acc + i, _mm256_mul_pd(_mm256_loadu_pd(acc + i), v));
    }
    for (; i < n; ++i) acc[i] *= tab[idx[i]];
}

void gather_add_v(const double* tab, const std::uint32_t* idx, double* acc, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m128i iv = _mm_loadu_si128(reinterpret_cast<const __m128i*>(idx + i));
        __m256d v = _mm256_i32gather_pd(tab, iv, 8);
        _mm256_storeu_pd(acc + i, _mm256_add_pd(_mm256_loadu_pd(acc + i), v));
    }
    for (; i < n; ++i) acc[i] += tab[idx[i]];
}

void clip_v(double* x, std::size_t n, double bound) {
    const __m256d bnd = vset(bound);
    const __m256d neg = vset(-bound);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d v = _mm256_loadu_pd(x + i);
        _mm256_storeu_pd(x + i, _mm256_min_pd(_mm256_max_pd(v, neg), bnd));
    }
    for (; i < n; ++i) x[i] = clip(x[i], bound);
}

}  // namespace

const KernelTable& avx2_table() {
    static const KernelTable t = {
        "avx2", tanh_half_v, atanh2_clip_v, llr_map_v, gather_mul_v, gather_add_v, clip_v,
    };
    return t;
}

bool avx2_supported() {
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}

}  // namespace twrde::kern

#else

namespace twrde::kern {

bool avx2_supported() { return false; }
const KernelTable& avx2_table() { return scalar_table(); }

}  // namespace twrde::kern

#endif
