#include "xiqed/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <type_traits>

#include "xiqed/error.hpp"

namespace xiqed {

namespace {

double conj_of(double x) { return x; }
Complex conj_of(const Complex &z) { return std::conj(z); }

double real_of(double x) { return x; }
double real_of(const Complex &z) { return z.real(); }

template <class T>
double off_diagonal_norm(const DenseMatrix<T> &a) {
    double sum = 0.0;
    for(std::size_t i = 0; i < a.rows(); ++i)
        for(std::size_t j = 0; j < a.cols(); ++j)
            if(i != j) sum += std::norm(a(i, j));
    return std::sqrt(sum);
}

template <class T>
double frobenius_norm(const DenseMatrix<T> &a) {
    double sum = 0.0;
    for(const auto &x : a.data()) sum += std::norm(x);
    return std::sqrt(sum);
}

// Unit phase e^{i arg(apq)}; 1 for real input.
template <class T>
T unit_phase(const T &apq) {
    if constexpr(std::is_same_v<T, double>) {
        return apq < 0.0 ? -1.0 : 1.0;
    } else {
        double mag = std::abs(apq);
        return mag > 0.0 ? apq / mag : Complex{1.0, 0.0};
    }
}

} // namespace

template <class T>
EigenDecomposition<T> jacobi_eigen(const DenseMatrix<T> &input, double tolerance, int max_sweeps) {
    const std::size_t dim = input.rows();
    DenseMatrix<T> a(dim, dim);
    // Hermitian completion from the upper triangle.
    for(std::size_t i = 0; i < dim; ++i) {
        a(i, i) = T{real_of(input(i, i))};
        for(std::size_t j = i + 1; j < dim; ++j) {
            a(i, j) = input(i, j);
            a(j, i) = conj_of(input(i, j));
        }
    }
    DenseMatrix<T> v = DenseMatrix<T>::identity(dim);

    const double threshold = tolerance * std::max(1.0, frobenius_norm(a));
    int sweep              = 0;
    while(off_diagonal_norm(a) > threshold) {
        if(sweep++ >= max_sweeps) {
            std::ostringstream msg;
            msg << "no convergence after " << max_sweeps << " sweeps on a " << dim << "x" << dim
                << " matrix (off-diagonal norm " << off_diagonal_norm(a) << ")";
            throw ModelError(ErrorKind::EigensolverNonConvergence, msg.str());
        }
        for(std::size_t p = 0; p + 1 < dim; ++p) {
            for(std::size_t q = p + 1; q < dim; ++q) {
                const double mag = std::abs(a(p, q));
                if(mag == 0.0) continue;
                const T phase   = unit_phase(a(p, q));
                const double tau = (real_of(a(q, q)) - real_of(a(p, p))) / (2.0 * mag);
                const double t   = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c   = 1.0 / std::sqrt(1.0 + t * t);
                const double s   = t * c;
                // U on the (p,q) plane: [[c, s], [-s conj(phase), c conj(phase)]]
                const T upp = T{c};
                const T upq = T{s};
                const T uqp = -s * conj_of(phase);
                const T uqq = c * conj_of(phase);
                for(std::size_t k = 0; k < dim; ++k) {
                    const T akp = a(k, p);
                    const T akq = a(k, q);
                    a(k, p)     = akp * upp + akq * uqp;
                    a(k, q)     = akp * upq + akq * uqq;
                }
                for(std::size_t k = 0; k < dim; ++k) {
                    const T apk = a(p, k);
                    const T aqk = a(q, k);
                    a(p, k)     = conj_of(upp) * apk + conj_of(uqp) * aqk;
                    a(q, k)     = conj_of(upq) * apk + conj_of(uqq) * aqk;
                }
                a(p, q) = T{};
                a(q, p) = T{};
                a(p, p) = T{real_of(a(p, p))};
                a(q, q) = T{real_of(a(q, q))};
                for(std::size_t k = 0; k < dim; ++k) {
                    const T vkp = v(k, p);
                    const T vkq = v(k, q);
                    v(k, p)     = vkp * upp + vkq * uqp;
                    v(k, q)     = vkp * upq + vkq * uqq;
                }
            }
        }
    }

    std::vector<std::size_t> order(dim);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t l, std::size_t r) { return real_of(a(l, l)) < real_of(a(r, r)); });

    EigenDecomposition<T> out;
    out.values.resize(dim);
    out.vectors = DenseMatrix<T>(dim, dim);
    for(std::size_t k = 0; k < dim; ++k) {
        out.values[k] = real_of(a(order[k], order[k]));
        for(std::size_t r = 0; r < dim; ++r) out.vectors(r, k) = v(r, order[k]);
    }
    return out;
}

template EigenDecomposition<double> jacobi_eigen(const RealMatrix &, double, int);
template EigenDecomposition<Complex> jacobi_eigen(const ComplexMatrix &, double, int);

} // namespace xiqed
