#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstddef>
#include <vector>

namespace eigqmc::combinatorics {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

// A multi-index in N_0^d. The dimension is the vector length; trailing zeros
// are significant only for bookkeeping, not for any of the values below.
using MultiIndex = std::vector<unsigned>;

BigInt factorial(unsigned n);
BigInt binomial(unsigned n, unsigned k);

// Stirling number of the second kind, S(n, k).
BigInt stirling2(unsigned n, unsigned k);

unsigned order(const MultiIndex& m);  // |m| = sum of entries
BigInt multi_factorial(const MultiIndex& m);  // m! = prod m_j!
BigInt multi_binomial(const MultiIndex& n, const MultiIndex& m);  // prod C(n_j, m_j)

// Multivariate Lah number:
//   |nu|! (|nu|-1)! / ( lam! (|nu|-|lam|)! (|lam|-1)! )
// Requires 1 <= |lam| <= |nu|.
BigRat multivariate_lah(const MultiIndex& nu, const MultiIndex& lam);

// Derivative-bound sequence chi_{nu,lam} defined by taking the recursive
// inequality that propagates factorial growth through compositions as an
// equality:
//   chi_{nu,0}     = [nu == 0]
//   chi_{nu,lam}   = 0 whenever |nu| < |lam|
//   chi_{nu+e_j,lam} = sum_{l in supp(lam)} sum_{0 <= m <= nu}
//                      C(nu, m) ((|m|+1)!)^beta b^{m+e_j} chi_{nu-m, lam-e_l}
// The expansion pins j to the first nonzero coordinate of nu, which makes the
// value well defined for every beta; for beta = 1 the result is independent
// of that choice and equals multivariate_lah(nu, lam) * b^nu.
//
// Exact path: beta = 1, rational b.
BigRat chi_exact(const MultiIndex& nu, const MultiIndex& lam, const std::vector<BigRat>& b);
// General path: beta >= 1, evaluated with 50-digit decimal floats internally.
double chi_real(const MultiIndex& nu, const MultiIndex& lam, const std::vector<double>& b,
                double beta);

// sum_{l=1}^{v} 1/((v-l)! (l-1)!) == 2^{v-1}/(v-1)!   (exact, v >= 1)
bool celine_identity_check(unsigned v);

// sum_{l=lam-1}^{v} (v-l+1)(l-1)!/(l-lam+1)! == (v+1)!/((v-lam+1)! lam (lam-1))
// (exact, v >= 1, 2 <= lam <= v+1)
bool gosper_identity_check(unsigned v, unsigned lam);

// sum_{m=0}^{n} C(n,m) S(n-m, k-1) == S(n+1, k)   (exact)
bool stirling_sum_identity_check(unsigned n, unsigned k);

}  // namespace eigqmc::combinatorics
