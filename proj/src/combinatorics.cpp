#include "eigqmc/combinatorics.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <map>
#include <stdexcept>

namespace eigqmc::combinatorics {

namespace {
using Real50 = boost::multiprecision::cpp_bin_float_50;
}

BigInt factorial(unsigned n) {
    BigInt r = 1;
    for (unsigned i = 2; i <= n; ++i) r *= i;
    return r;
}

BigInt binomial(unsigned n, unsigned k) {
    if (k > n) return 0;
    k = std::min(k, n - k);
    BigInt r = 1;
    for (unsigned i = 1; i <= k; ++i) {
        r *= (n - k + i);
        r /= i;
    }
    return r;
}

BigInt stirling2(unsigned n, unsigned k) {
    if (k > n) return 0;
    if (n == 0) return 1;  // k == 0 here
    if (k == 0) return 0;
    // S(n+1, k) = k S(n, k) + S(n, k-1), built row by row.
    std::vector<BigInt> row(k + 1, 0);
    row[0] = 1;  // row for n = 0
    for (unsigned i = 1; i <= n; ++i) {
        for (unsigned j = std::min(i, k); j >= 1; --j)
            row[j] = BigInt(j) * row[j] + row[j - 1];
        row[0] = 0;
    }
    return row[k];
}

unsigned order(const MultiIndex& m) {
    unsigned s = 0;
    for (unsigned v : m) s += v;
    return s;
}

BigInt multi_factorial(const MultiIndex& m) {
    BigInt r = 1;
    for (unsigned v : m) r *= factorial(v);
    return r;
}

BigInt multi_binomial(const MultiIndex& n, const MultiIndex& m) {
    if (n.size() != m.size()) throw std::invalid_argument("multi_binomial: dimension mismatch");
    BigInt r = 1;
    for (std::size_t j = 0; j < n.size(); ++j) r *= binomial(n[j], m[j]);
    return r;
}

BigRat multivariate_lah(const MultiIndex& nu, const MultiIndex& lam) {
    const unsigned anu = order(nu);
    const unsigned alam = order(lam);
    if (alam < 1 || alam > anu)
        throw std::invalid_argument("multivariate_lah: requires 1 <= |lam| <= |nu|");
    BigRat num(factorial(anu) * factorial(anu - 1));
    BigRat den(multi_factorial(lam) * factorial(anu - alam) * factorial(alam - 1));
    return num / den;
}

namespace {

// Shared skeleton for both chi evaluations. Value is a ring with +, *.
template <typename Value, typename TermFn>
class ChiTable {
  public:
    explicit ChiTable(TermFn term) : term_(term) {}

    Value get(const MultiIndex& nu, const MultiIndex& lam) {
        const unsigned anu = order(nu);
        const unsigned alam = order(lam);
        if (alam == 0) return Value(anu == 0 ? 1 : 0);
        if (anu < alam) return Value(0);
        const auto key = std::make_pair(nu, lam);
        if (auto it = memo_.find(key); it != memo_.end()) return it->second;

        // Expand along the first nonzero coordinate of nu.
        std::size_t j = 0;
        while (nu[j] == 0) ++j;
        MultiIndex base = nu;
        base[j] -= 1;

        Value total(0);
        for (std::size_t l = 0; l < lam.size(); ++l) {
            if (lam[l] == 0) continue;
            MultiIndex lam2 = lam;
            lam2[l] -= 1;
            // Sum over 0 <= m <= base (componentwise).
            MultiIndex m(base.size(), 0);
            for (;;) {
                total = total + term_(base, m, j) * get(subtract(base, m), lam2);
                std::size_t c = 0;
                while (c < m.size()) {
                    if (m[c] < base[c]) {
                        ++m[c];
                        break;
                    }
                    m[c] = 0;
                    ++c;
                }
                if (c == m.size()) break;
            }
        }
        memo_.emplace(key, total);
        return total;
    }

  private:
    static MultiIndex subtract(const MultiIndex& a, const MultiIndex& b) {
        MultiIndex r = a;
        for (std::size_t i = 0; i < r.size(); ++i) r[i] -= b[i];
        return r;
    }

    TermFn term_;
    std::map<std::pair<MultiIndex, MultiIndex>, Value> memo_;
};

}  // namespace

BigRat chi_exact(const MultiIndex& nu, const MultiIndex& lam, const std::vector<BigRat>& b) {
    if (b.size() != nu.size()) throw std::invalid_argument("chi_exact: b dimension mismatch");
    if (nu.size() != lam.size()) throw std::invalid_argument("chi_exact: dimension mismatch");
    // term = C(base, m) (|m|+1)! b^{m+e_j}   (beta = 1)
    auto term = [&b](const MultiIndex& base, const MultiIndex& m, std::size_t j) {
        BigRat t(multi_binomial(base, m) * factorial(order(m) + 1));
        for (std::size_t i = 0; i < m.size(); ++i)
            for (unsigned q = 0; q < m[i]; ++q) t *= b[i];
        t *= b[j];
        return t;
    };
    ChiTable<BigRat, decltype(term)> table(term);
    return table.get(nu, lam);
}

double chi_real(const MultiIndex& nu, const MultiIndex& lam, const std::vector<double>& b,
                double beta) {
    if (b.size() != nu.size()) throw std::invalid_argument("chi_real: b dimension mismatch");
    if (nu.size() != lam.size()) throw std::invalid_argument("chi_real: dimension mismatch");
    if (beta < 1.0) throw std::invalid_argument("chi_real: beta must be >= 1");
    auto term = [&b, beta](const MultiIndex& base, const MultiIndex& m, std::size_t j) {
        Real50 t(multi_binomial(base, m).str());
        t *= pow(Real50(factorial(order(m) + 1).str()), Real50(beta));
        for (std::size_t i = 0; i < m.size(); ++i)
            for (unsigned q = 0; q < m[i]; ++q) t *= Real50(b[i]);
        t *= Real50(b[j]);
        return t;
    };
    ChiTable<Real50, decltype(term)> table(term);
    return table.get(nu, lam).convert_to<double>();
}

bool celine_identity_check(unsigned v) {
    if (v < 1) throw std::invalid_argument("celine_identity_check: v >= 1");
    BigRat lhs = 0;
    for (unsigned l = 1; l <= v; ++l)
        lhs += BigRat(1) / BigRat(factorial(v - l) * factorial(l - 1));
    BigInt two_pow = BigInt(1) << (v - 1);
    BigRat rhs = BigRat(two_pow) / BigRat(factorial(v - 1));
    return lhs == rhs;
}

bool gosper_identity_check(unsigned v, unsigned lam) {
    if (v < 1 || lam < 2 || lam > v + 1)
        throw std::invalid_argument("gosper_identity_check: requires v >= 1, 2 <= lam <= v+1");
    BigRat lhs = 0;
    for (unsigned l = lam - 1; l <= v; ++l) {
        lhs += BigRat(BigInt(v - l + 1) * factorial(l - 1)) / BigRat(factorial(l - lam + 1));
    }
    BigRat rhs = BigRat(factorial(v + 1)) /
                 BigRat(factorial(v - lam + 1) * BigInt(lam) * BigInt(lam - 1));
    return lhs == rhs;
}

bool stirling_sum_identity_check(unsigned n, unsigned k) {
    if (k < 1) throw std::invalid_argument("stirling_sum_identity_check: k >= 1");
    BigInt lhs = 0;
    for (unsigned m = 0; m <= n; ++m) lhs += binomial(n, m) * stirling2(n - m, k - 1);
    return lhs == stirling2(n + 1, k);
}

}  // namespace eigqmc::combinatorics
