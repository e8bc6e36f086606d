#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

namespace cvqc {

/// Sparse multivariate polynomial over the canonical coordinates of n modes,
/// variables ordered (q0, p0, q1, p1, ...). Coefficients are long double
/// (64-bit mantissa on x86), compared with an absolute/relative tolerance.
/// Total degree is capped; a single cubic gate composed with quadratics never
/// exceeds degree 2 images, so the cap only trips on pathological words.
template <typename Scalar = long double>
class Polynomial {
public:
    using Monomial = std::vector<std::uint8_t>; // exponent per variable

    static constexpr int kMaxDegree = 6;
    static constexpr Scalar kCoeffTol = 1e-12L;

    Polynomial() = default;

    static Polynomial constant(int n_vars, Scalar c) {
        Polynomial p(n_vars);
        if (c != Scalar(0)) p.terms_[Monomial(n_vars, 0)] = c;
        return p;
    }

    static Polynomial variable(int n_vars, int index) {
        if (index < 0 || index >= n_vars) throw std::out_of_range("Polynomial: bad variable");
        Polynomial p(n_vars);
        Monomial m(n_vars, 0);
        m[index] = 1;
        p.terms_[m] = Scalar(1);
        return p;
    }

    int n_vars() const { return n_vars_; }

    int degree() const {
        int d = 0;
        for (const auto& [m, c] : terms_) d = std::max(d, degree_of(m));
        return d;
    }

    Polynomial& operator+=(const Polynomial& o) {
        require_same_vars(o);
        for (const auto& [m, c] : o.terms_) add_term(m, c);
        return *this;
    }
    Polynomial& operator-=(const Polynomial& o) {
        require_same_vars(o);
        for (const auto& [m, c] : o.terms_) add_term(m, -c);
        return *this;
    }
    friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
    friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }

    friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
        a.require_same_vars(b);
        Polynomial out(a.n_vars_);
        for (const auto& [ma, ca] : a.terms_) {
            for (const auto& [mb, cb] : b.terms_) {
                Monomial m(a.n_vars_);
                for (int k = 0; k < a.n_vars_; ++k) m[k] = static_cast<std::uint8_t>(ma[k] + mb[k]);
                if (degree_of(m) > kMaxDegree)
                    throw std::domain_error("Polynomial: degree cap exceeded");
                out.add_term(m, ca * cb);
            }
        }
        return out;
    }

    friend Polynomial operator*(Scalar c, Polynomial p) {
        for (auto& [m, coeff] : p.terms_) coeff *= c;
        p.prune();
        return p;
    }

    /// Substitutes images[k] for variable k.
    Polynomial substitute(const std::vector<Polynomial>& images) const {
        if (static_cast<int>(images.size()) != n_vars_)
            throw std::invalid_argument("Polynomial::substitute: arity mismatch");
        Polynomial out(n_vars_);
        for (const auto& [m, c] : terms_) {
            Polynomial term = constant(n_vars_, c);
            for (int k = 0; k < n_vars_; ++k)
                for (int e = 0; e < m[k]; ++e) term = term * images[k];
            out += term;
        }
        return out;
    }

    Polynomial derivative(int var) const {
        Polynomial out(n_vars_);
        for (const auto& [m, c] : terms_) {
            if (m[var] == 0) continue;
            Monomial d = m;
            d[var] -= 1;
            out.add_term(d, c * Scalar(m[var]));
        }
        return out;
    }

    bool is_zero(Scalar tol = kCoeffTol) const {
        for (const auto& [m, c] : terms_)
            if (std::abs((double)c) > (double)tol) return false;
        return true;
    }

    bool equals(const Polynomial& o, Scalar tol = kCoeffTol) const {
        return (*this - o).is_zero(tol);
    }

    const std::map<Monomial, Scalar>& terms() const { return terms_; }

    /// Human-readable form like "q0 + 3 q0^2 p1", used in residual reports.
    std::string str() const {
        if (terms_.empty()) return "0";
        std::string out;
        for (const auto& [m, c] : terms_) {
            if (!out.empty()) out += " + ";
            out += std::to_string((double)c);
            for (int k = 0; k < n_vars_; ++k) {
                if (m[k] == 0) continue;
                out += (k % 2 == 0 ? " q" : " p") + std::to_string(k / 2);
                if (m[k] > 1) out += "^" + std::to_string((int)m[k]);
            }
        }
        return out;
    }

private:
    explicit Polynomial(int n_vars) : n_vars_(n_vars) {}

    static int degree_of(const Monomial& m) {
        int d = 0;
        for (auto e : m) d += e;
        return d;
    }

    void require_same_vars(const Polynomial& o) const {
        if (n_vars_ != o.n_vars_) throw std::invalid_argument("Polynomial: arity mismatch");
    }

    void add_term(const Monomial& m, Scalar c) {
        auto it = terms_.find(m);
        if (it == terms_.end()) {
            if (c != Scalar(0)) terms_[m] = c;
        } else {
            it->second += c;
            if (std::abs((double)it->second) < 1e-30) terms_.erase(it);
        }
    }

    void prune() {
        for (auto it = terms_.begin(); it != terms_.end();)
            it = (std::abs((double)it->second) < 1e-30) ? terms_.erase(it) : std::next(it);
    }

    int n_vars_ = 0;
    std::map<Monomial, Scalar> terms_;
};

using Poly = Polynomial<long double>;

} // namespace cvqc
