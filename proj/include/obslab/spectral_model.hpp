#pragma once

// Finite spectral truncation of an abstract selfadjoint operator together
// with an observation pairing.
//
// A model holds the first n eigenvalues 0 < lambda_1 <= ... <= lambda_n and
// the Gram matrix of the observed eigenbasis, M_{ij} = <Obs e_i, Obs e_j>_K.
// The observation space K is never materialized; every experiment needs only
// M, or a factor R with M = R^* R, whose rows give concrete traces R c(t).
//
// The 1D builder is the Dirichlet interval (0,L): lambda_nu = (nu pi / L)^2,
// e_nu(x) = sqrt(2/L) sin(nu pi x / L), with closed-form pairings for
// interior-indicator and boundary-derivative observations. Quadrature appears
// only in test oracles, never here.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <utility>

namespace obslab {

enum class ObsKind { identity, interior_indicator, neumann_trace, matrix };

struct ObservationSpec {
    ObsKind kind = ObsKind::identity;
    double x_lo = 0.0;          // interior_indicator: window endpoints
    double x_hi = 0.0;
    bool right_endpoint = false; // neumann_trace: x0 = L instead of x0 = 0
    Eigen::MatrixXcd B;          // matrix kind: q x n, acts on eigen-coefficients
    double m0 = 0.0;             // admissibility exponent carried by the observation
};

struct SpectralModel {
    int n_modes = 0;
    Eigen::VectorXd lambda;      // ascending, > 0
    Eigen::VectorXd sqrt_lambda;
    Eigen::MatrixXcd pairing;    // M, Hermitian PSD
    Eigen::MatrixXcd factor;     // R with M = R^* R; rows = concrete observation channels
    double m0 = 0.0;
    std::string construction;
};

namespace detail {

inline std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// Hermitian PSD square-root factor via eigendecomposition, clipping the
// negative roundoff tail. Returns R with M = R^* R.
inline Eigen::MatrixXcd psd_factor(const Eigen::MatrixXcd& M) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(M);
    if (es.info() != Eigen::Success) throw std::runtime_error("pairing factorization failed");
    Eigen::VectorXd d = es.eigenvalues();
    for (int i = 0; i < d.size(); ++i) d(i) = d(i) > 0.0 ? std::sqrt(d(i)) : 0.0;
    return d.asDiagonal() * es.eigenvectors().adjoint();
}

} // namespace detail

// M_{ij} accessor (0-based mode indices).
inline std::complex<double> obs_inner(const SpectralModel& m, int i, int j) {
    if (i < 0 || j < 0 || i >= m.n_modes || j >= m.n_modes)
        throw std::invalid_argument("obs_inner: mode index out of range");
    return m.pairing(i, j);
}

inline SpectralModel build_dirichlet_interval(double length, int n, const ObservationSpec& obs) {
    if (!(length > 0.0)) throw std::invalid_argument("dirichlet interval: length must be positive");
    if (n < 1) throw std::invalid_argument("dirichlet interval: need at least one mode");

    SpectralModel m;
    m.n_modes = n;
    m.lambda.resize(n);
    m.sqrt_lambda.resize(n);
    const double pi = 3.141592653589793238462643383279502884;
    for (int i = 0; i < n; ++i) {
        const double w = (i + 1) * pi / length;
        m.sqrt_lambda(i) = w;
        m.lambda(i) = w * w;
    }
    m.m0 = obs.m0;

    switch (obs.kind) {
    case ObsKind::identity: {
        m.pairing = Eigen::MatrixXcd::Identity(n, n);
        m.factor = Eigen::MatrixXcd::Identity(n, n);
        m.construction = "dirichlet_interval(L=" + detail::fmt_double(length) + ",n=" + std::to_string(n) + ") obs=identity";
        break;
    }
    case ObsKind::interior_indicator: {
        if (!(0.0 <= obs.x_lo && obs.x_lo < obs.x_hi && obs.x_hi <= length))
            throw std::invalid_argument("interior indicator: need 0 <= x_lo < x_hi <= L");
        Eigen::MatrixXd M(n, n);
        // (2/L) int_a^b sin(w_i x) sin(w_j x) dx via product-to-sum.
        auto anti = [&](int i, int j, double x) {
            const double wi = m.sqrt_lambda(i), wj = m.sqrt_lambda(j);
            if (i == j) return x / 2.0 - std::sin(2.0 * wi * x) / (4.0 * wi);
            return std::sin((wi - wj) * x) / (2.0 * (wi - wj)) - std::sin((wi + wj) * x) / (2.0 * (wi + wj));
        };
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) {
                const double v = (2.0 / length) * (anti(i, j, obs.x_hi) - anti(i, j, obs.x_lo));
                M(i, j) = v;
                M(j, i) = v;
            }
        m.pairing = M.cast<std::complex<double>>();
        m.factor = detail::psd_factor(m.pairing);
        m.construction = "dirichlet_interval(L=" + detail::fmt_double(length) + ",n=" + std::to_string(n) +
                       ") obs=interior(" + detail::fmt_double(obs.x_lo) + "," + detail::fmt_double(obs.x_hi) + ")";
        break;
    }
    case ObsKind::neumann_trace: {
        // Obs u = u'(x0), x0 in {0, L}; e_nu'(x0) = sqrt(2/L) w_nu cos(w_nu x0).
        Eigen::RowVectorXcd b(n);
        for (int i = 0; i < n; ++i) {
            double v = std::sqrt(2.0 / length) * m.sqrt_lambda(i);
            if (obs.right_endpoint && ((i + 1) % 2 == 1)) v = -v; // cos(nu pi) = (-1)^nu
            b(i) = v;
        }
        m.factor = b;
        m.pairing = b.adjoint() * b;
        m.construction = "dirichlet_interval(L=" + detail::fmt_double(length) + ",n=" + std::to_string(n) +
                       ") obs=neumann_trace(" + (obs.right_endpoint ? "L" : "0") + ")";
        break;
    }
    case ObsKind::matrix: {
        if (obs.B.cols() != n) throw std::invalid_argument("matrix observation: B must have n columns");
        m.factor = obs.B;
        m.pairing = obs.B.adjoint() * obs.B;
        m.construction = "dirichlet_interval(L=" + detail::fmt_double(length) + ",n=" + std::to_string(n) + ") obs=matrix";
        break;
    }
    }
    return m;
}

// General dense route: S symmetric positive definite, observed through B in
// the coordinates of S. Eigenpairs of S give lambda and the eigenbasis V;
// the pairing is (BV)^* (BV).
inline SpectralModel build_dense(const Eigen::MatrixXd& S, const Eigen::MatrixXd& B, double m0) {
    const int n = static_cast<int>(S.rows());
    if (S.cols() != n || n < 1) throw std::invalid_argument("build_dense: S must be square and nonempty");
    const double scale = std::max(1.0, S.cwiseAbs().maxCoeff());
    if (((S - S.transpose()).cwiseAbs().maxCoeff()) > 1e-10 * scale)
        throw std::invalid_argument("build_dense: S is not symmetric within 1e-10");
    if (B.cols() != n) throw std::invalid_argument("build_dense: B must have n columns");

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S);
    if (es.info() != Eigen::Success) throw std::runtime_error("build_dense: eigensolve failed");
    if (!(es.eigenvalues()(0) > 0.0))
        throw std::invalid_argument("build_dense: S is not positive definite");

    SpectralModel m;
    m.n_modes = n;
    m.lambda = es.eigenvalues();
    m.sqrt_lambda = m.lambda.cwiseSqrt();
    const Eigen::MatrixXd BV = B * es.eigenvectors();
    m.factor = BV.cast<std::complex<double>>();
    m.pairing = m.factor.adjoint() * m.factor;
    m.m0 = m0;
    m.construction = "dense(n=" + std::to_string(n) + ")";
    return m;
}

// Copy of the model with mode i removed from the observation: row/column i of
// the pairing and column i of the factor are zeroed. Used to reproduce
// invisible solutions when unique continuation fails.
inline SpectralModel blind_mode(const SpectralModel& m, int i) {
    if (i < 0 || i >= m.n_modes) throw std::invalid_argument("blind_mode: index out of range");
    SpectralModel out = m;
    out.pairing.row(i).setZero();
    out.pairing.col(i).setZero();
    out.factor.col(i).setZero();
    out.construction += " blinded(nu=" + std::to_string(i + 1) + ")";
    return out;
}

} // namespace obslab
