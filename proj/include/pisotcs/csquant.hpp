#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "errors.hpp"
#include "moment.hpp"
#include "pisot_core.hpp"

namespace pisotcs::csquant
{
using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

//! Default truncation tolerance for coherent-state series.
inline constexpr double default_model_tol = 1e-30;

enum class SequenceFamily
{
    pisot,  //!< exact integers from a symmetric unit spec
    classical,  //!< x_n = n
    generic  //!< floating symmetric brackets s[n]_q
};

namespace detail
{
//! ln(e^a + e^b) without overflow.
inline double log_add(double a, double b)
{
    if (a == -std::numeric_limits<double>::infinity())
        return b;
    if (b == -std::numeric_limits<double>::infinity())
        return a;
    double const hi = std::max(a, b);
    return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

constexpr double neg_inf = -std::numeric_limits<double>::infinity();
}  // namespace detail

//---------------------------------------------------------------------------//
// Fock model
//---------------------------------------------------------------------------//

/*!
 * A deformed-integer sequence x_n together with the truncation N_max of the
 * Fock basis |e_0>, ..., |e_{N_max}>.
 *
 * N_max is the first index past the peak of t^n / x_n! (t = z_max^2) whose
 * term and geometric tail both fall below tol * N(t).  The sequence itself
 * is stored further out (series_size() entries) so that normalizations,
 * d_k(r) and the distribution moments are evaluated without truncation
 * bias inside the basis.
 */
class FockModel
{
  public:
    static FockModel
    pisot(std::int64_t s, double z_max, double tol = default_model_tol)
    {
        auto const spec = DeformationSpec::bosonic(s);
        spec.validate();
        FockModel m(SequenceFamily::pisot,
                    solve_unit_quadratic(spec).q,
                    z_max,
                    tol);
        m.spec_ = spec;
        m.build();
        return m;
    }

    static FockModel classical(double z_max, double tol = default_model_tol)
    {
        FockModel m(SequenceFamily::classical, 1.0, z_max, tol);
        m.build();
        return m;
    }

    //! Floating symmetric q-integers; q and 1/q give the same model.
    static FockModel
    generic(double q, double z_max, double tol = default_model_tol)
    {
        if (!(q > 0) || !std::isfinite(q))
        {
            throw OutOfDomain("generic model needs a finite q > 0");
        }
        if (q > 1)
            q = 1 / q;
        if (q == 1.0)
            return classical(z_max, tol);
        FockModel m(SequenceFamily::generic, q, z_max, tol);
        m.build();
        return m;
    }

    SequenceFamily family() const { return family_; }
    double q() const { return q_; }
    std::optional<DeformationSpec> const& spec() const { return spec_; }
    double z_max() const { return z_max_; }
    double tol() const { return tol_; }

    //! q + 1/q: the integer s for Pisot models, 2 at q = 1.
    double s_value() const
    {
        if (spec_)
            return static_cast<double>(spec_->s);
        return q_ + 1 / q_;
    }

    int n_max() const { return n_max_; }
    int dim() const { return n_max_ + 1; }
    int series_size() const { return static_cast<int>(x_.size()); }

    double x(int n) const { return x_.at(n); }
    //! x_{n+1} - x_n, from exact integers when available.
    double gap(int n) const { return gap_.at(n); }
    double log_factorial(int n) const { return log_fact_.at(n); }
    //! ln x_{m/2}!; odd m uses the generalized factorial.
    double log_factorial_half(int m) const { return log_half_.at(m); }

    //! Exact integer x_n (Pisot models only).
    BigInt const& x_exact(int n) const
    {
        if (family_ != SequenceFamily::pisot)
            throw InvalidSpec("exact integers exist only for Pisot models");
        return exact_.at(n);
    }

    moment::WDensity const& weight() const { return weight_; }

    //! Throw OutOfDomain unless 0 <= t <= z_max^2.
    void require_in_range(double t, char const* what) const
    {
        double const limit = z_max_ * z_max_ * (1 + 1e-12);
        if (!(t >= 0) || t > limit)
        {
            throw OutOfDomain(std::string(what) + ": |z|^2 = "
                              + std::to_string(t)
                              + " exceeds the model range z_max^2 = "
                              + std::to_string(z_max_ * z_max_));
        }
    }

    //! ln of N(t) = sum_n t^n / x_n!.
    double log_normalization(double t) const
    {
        require_in_range(t, "log_normalization");
        if (t == 0)
            return 0;
        double const lt = std::log(t);
        double sum = detail::neg_inf;
        for (int n = 0; n < series_size(); ++n)
            sum = detail::log_add(sum, n * lt - log_fact_[n]);
        return sum;
    }

    double normalization(double t) const
    {
        return std::exp(log_normalization(t));
    }

    //! Probabilities t^n / (N(t) x_n!) over the whole stored series.
    std::vector<double> distribution(double t) const
    {
        std::vector<double> rho(series_size(), 0.0);
        if (t == 0)
        {
            rho[0] = 1;
            return rho;
        }
        double const ln_norm = log_normalization(t);
        double const lt = std::log(t);
        for (int n = 0; n < series_size(); ++n)
            rho[n] = std::exp(n * lt - log_fact_[n] - ln_norm);
        return rho;
    }

  private:
    FockModel(SequenceFamily family, double q, double z_max, double tol)
        : family_{family}, q_{q}, z_max_{z_max}, tol_{tol}, weight_{q}
    {
        if (!(z_max >= 0) || !std::isfinite(z_max))
            throw OutOfDomain("z_max must be finite and >= 0");
        if (!(tol > 0 && tol < 1))
            throw OutOfDomain("tolerance must lie in (0, 1)");
    }

    void push_next()
    {
        int const n = static_cast<int>(x_.size());
        switch (family_)
        {
            case SequenceFamily::pisot: {
                BigInt next = n == 0 ? BigInt(0)
                              : n == 1
                                  ? BigInt(1)
                                  : spec_->s * exact_[n - 1] - exact_[n - 2];
                exact_.push_back(next);
                x_.push_back(next.convert_to<double>());
                if (n == 0)
                {
                    exact_fact_.emplace_back(1);
                    log_fact_.push_back(0);
                }
                else
                {
                    exact_fact_.push_back(exact_fact_.back() * next);
                    log_fact_.push_back(log_of(exact_fact_.back()));
                }
                return;
            }
            case SequenceFamily::classical:
                x_.push_back(n);
                break;
            case SequenceFamily::generic:
                x_.push_back(deformed_integer(DeformationKind::symmetric, q_,
                                              n));
                break;
        }
        log_fact_.push_back(n == 0 ? 0.0
                                   : log_fact_.back() + std::log(x_.back()));
    }

    void build()
    {
        push_next();
        push_next();
        double const t = z_max_ * z_max_;
        n_max_ = 2;
        if (t > 0)
        {
            double const lt = std::log(t);
            double const ltol = std::log(tol_);
            double log_sum = 0;  // n = 0 term
            constexpr int n_limit = 200000;
            for (int n = 1;; ++n)
            {
                while (series_size() <= n + 1)
                    push_next();
                double const lterm = n * lt - log_fact_[n];
                log_sum = detail::log_add(log_sum, lterm);
                if (n >= 2 && x_[n + 1] > t)
                {
                    double const rho = t / x_[n + 1];
                    double const ltail = lterm + std::log(rho / (1 - rho));
                    if (lterm < ltol + log_sum && ltail < ltol + log_sum)
                    {
                        n_max_ = n;
                        break;
                    }
                }
                if (n == n_limit)
                    throw NonConvergent("build_model: truncation search did "
                                        "not terminate");
            }
        }
        int const size = std::max(2 * n_max_ + 16, 48);
        while (series_size() < size)
            push_next();

        gap_.resize(size - 1);
        for (int n = 0; n + 1 < size; ++n)
        {
            gap_[n] = family_ == SequenceFamily::pisot
                          ? BigInt(exact_[n + 1] - exact_[n])
                                .convert_to<double>()
                          : x_[n + 1] - x_[n];
        }

        log_half_.resize(2 * size - 1);
        moment::DiscreteMeasure const* varpi
            = q_ == 1.0 ? nullptr : &weight_.measure();
        for (int m = 0; m < 2 * size - 1; ++m)
        {
            if (m % 2 == 0)
                log_half_[m] = log_fact_[m / 2];
            else if (varpi)
                log_half_[m]
                    = moment::log_generalized_factorial(*varpi, 0.5 * m);
            else
                log_half_[m] = std::lgamma(0.5 * m + 1);
        }
    }

    SequenceFamily family_;
    double q_;
    std::optional<DeformationSpec> spec_;
    double z_max_;
    double tol_;
    int n_max_{2};
    std::vector<double> x_;
    std::vector<double> gap_;
    std::vector<double> log_fact_;
    std::vector<double> log_half_;
    std::vector<BigInt> exact_;
    std::vector<BigInt> exact_fact_;
    moment::WDensity weight_;
};

//! Model for a symmetric unit spec; fermionic or degenerate specs are rejected.
inline FockModel build_model(DeformationSpec const& spec,
                             double z_max,
                             double tol = default_model_tol)
{
    spec.validate();
    if (spec.kind != DeformationKind::symmetric)
    {
        throw InvalidSpec(std::string("coherent states need the symmetric "
                                      "deformation, got ")
                          + to_string(spec.kind));
    }
    return FockModel::pisot(spec.s, z_max, tol);
}

//---------------------------------------------------------------------------//
// Coherent states
//---------------------------------------------------------------------------//

struct CoherentState
{
    Complex z;
    Vector coeffs;  //!< c_n = z^n / sqrt(N(|z|^2) x_n!), n = 0..N_max
    double tail_mass{};  //!< probability carried by n > N_max
};

inline CoherentState coherent_state(FockModel const& model, Complex z)
{
    double const t = std::norm(z);
    model.require_in_range(t, "coherent_state");
    CoherentState state{z, Vector::Zero(model.dim()), 0.0};
    if (t == 0)
    {
        state.coeffs(0) = 1;
        return state;
    }
    double const ln_norm = model.log_normalization(t);
    double const lt = std::log(t);
    double const phase = std::arg(z);
    for (int n = 0; n < model.dim(); ++n)
    {
        double const mag
            = std::exp(0.5 * (n * lt - model.log_factorial(n) - ln_norm));
        state.coeffs(n) = std::polar(mag, n * phase);
    }
    for (int n = model.dim(); n < model.series_size(); ++n)
        state.tail_mass += std::exp(n * lt - model.log_factorial(n) - ln_norm);
    return state;
}

//---------------------------------------------------------------------------//
// Photon statistics
//---------------------------------------------------------------------------//

//! (x_{n+1}/x_n) / ((n+1)/n) for n >= 1.
inline double characteristic_functional(FockModel const& model, int n)
{
    if (n < 1 || n + 1 >= model.series_size())
        throw OutOfDomain("characteristic functional needs 1 <= n < "
                          "series size - 1");
    return (model.x(n + 1) / model.x(n)) * (static_cast<double>(n) / (n + 1));
}

//! sqrt(x_{n+1}/(n+1)): a^dagger |e_n> = coefficient * b^dagger |e_n>.
inline double boson_coefficient(FockModel const& model, int n)
{
    if (n < 0 || n + 1 >= model.series_size())
        throw OutOfDomain("boson coefficient index out of range");
    return std::sqrt(model.x(n + 1) / (n + 1));
}

struct PhotonStatistics
{
    std::vector<double> probabilities;  //!< rho(n, |z|), n = 0..N_max
    double mean_deformed{};  //!< <x_N>
    double mean_number{};  //!< <N>
    double mandel{};  //!< (Var N - <N>)/<N>
    double mandel_deformed{};  //!< (Var x_N - <x_N>)/<x_N>
    std::vector<double> characteristic;  //!< rho_q(n), n = 1..N_max
    double snr{};  //!< <Q>^2 / (Delta Q)^2
};

inline PhotonStatistics photon_statistics(FockModel const& model, Complex z)
{
    double const t = std::norm(z);
    model.require_in_range(t, "photon_statistics");
    auto const rho = model.distribution(t);
    PhotonStatistics stats;
    stats.probabilities.assign(rho.begin(), rho.begin() + model.dim());

    double mean_x = 0;
    double mean_n = 0;
    double mean_gap = 0;
    for (std::size_t n = 0; n < rho.size(); ++n)
    {
        mean_x += rho[n] * model.x(n);
        mean_n += rho[n] * static_cast<double>(n);
        if (n + 1 < rho.size())
            mean_gap += rho[n] * model.gap(n);
    }
    double var_x = 0;
    double var_n = 0;
    for (std::size_t n = 0; n < rho.size(); ++n)
    {
        double const dx = model.x(n) - mean_x;
        double const dn = static_cast<double>(n) - mean_n;
        var_x += rho[n] * dx * dx;
        var_n += rho[n] * dn * dn;
    }
    stats.mean_deformed = mean_x;
    stats.mean_number = mean_n;
    stats.mandel = mean_n > 0 ? (var_n - mean_n) / mean_n : 0.0;
    stats.mandel_deformed = mean_x > 0 ? (var_x - mean_x) / mean_x : 0.0;
    for (int n = 1; n <= model.n_max(); ++n)
        stats.characteristic.push_back(characteristic_functional(model, n));
    double const var_q = 0.5 * mean_gap;
    stats.snr = 2 * z.real() * z.real() / var_q;
    return stats;
}

//---------------------------------------------------------------------------//
// Operators
//---------------------------------------------------------------------------//

enum class OperatorLabel
{
    a,
    a_dagger,
    x_N,
    Q,
    P,
    A_theta,
    A_radial,
    A_angular,
    custom
};

/*!
 * Compression of an operator to span{|e_0>, ..., |e_{N_max}>}.
 *
 * polluted_band counts trailing rows/columns that differ from the
 * infinite-dimensional operator because a product was formed after
 * truncation.  Direct compressions have band 0.
 */
struct TruncatedOperator
{
    Matrix matrix;
    OperatorLabel label{OperatorLabel::custom};
    int polluted_band{0};
    std::string name;

    //! Leading block free of truncation pollution.
    Matrix interior() const
    {
        auto const n = std::max<Eigen::Index>(matrix.rows() - polluted_band,
                                              0);
        return matrix.topLeftCorner(n, n);
    }

    bool is_hermitian_exact() const { return matrix == matrix.adjoint(); }
};

struct LadderOperators
{
    TruncatedOperator a;
    TruncatedOperator a_dagger;
    TruncatedOperator number;  //!< x_N = a^dagger a
    TruncatedOperator Q;
    TruncatedOperator P;
    TruncatedOperator commutator_a;  //!< [a, a^dagger]
    TruncatedOperator commutator_qp;  //!< [Q, P]
};

inline LadderOperators ladder_and_quadratures(FockModel const& model)
{
    int const d = model.dim();
    Matrix a = Matrix::Zero(d, d);
    Matrix number = Matrix::Zero(d, d);
    for (int n = 1; n < d; ++n)
        a(n - 1, n) = std::sqrt(model.x(n));
    for (int n = 0; n < d; ++n)
        number(n, n) = model.x(n);
    Matrix const a_dag = a.transpose();
    double const inv_sqrt2 = 1 / std::numbers::sqrt2;
    Matrix const Q = (a + a_dag) * inv_sqrt2;
    Matrix const P = (a - a_dag) * Complex(0, -inv_sqrt2);

    LadderOperators ops;
    ops.a = {a, OperatorLabel::a, 0, "a"};
    ops.a_dagger = {a_dag, OperatorLabel::a_dagger, 0, "a_dagger"};
    ops.number = {number, OperatorLabel::x_N, 0, "x_N"};
    ops.Q = {Q, OperatorLabel::Q, 0, "Q"};
    ops.P = {P, OperatorLabel::P, 0, "P"};
    ops.commutator_a
        = {a * a_dag - a_dag * a, OperatorLabel::custom, 2, "[a,a_dagger]"};
    ops.commutator_qp = {Q * P - P * Q, OperatorLabel::custom, 2, "[Q,P]"};
    return ops;
}

/*!
 * Quantized monomial z^j zbar^k: entries x_{n+j}! / sqrt(x_n! x_{n'}!) at
 * n' = n + j - k, formed from products of x_m to keep integer data exact.
 */
inline TruncatedOperator
quantize_monomial(FockModel const& model, int j, int k)
{
    if (j < 0 || k < 0)
        throw OutOfDomain("monomial powers must be nonnegative");
    int const d = model.dim();
    Matrix m = Matrix::Zero(d, d);
    for (int n = 0; n < d; ++n)
    {
        int const np = n + j - k;
        if (np < 0 || np >= d)
            continue;
        int const top = n + j;
        if (top >= model.series_size())
            continue;
        double prod = 1;
        for (int i = n + 1; i <= top; ++i)
            prod *= model.x(i);
        for (int i = np + 1; i <= top; ++i)
            prod *= model.x(i);
        m(n, np) = std::sqrt(prod);
    }
    return {m, OperatorLabel::custom, 0,
            "z^" + std::to_string(j) + " zbar^" + std::to_string(k)};
}

/*!
 * Diagonal operator for a radial observable f(|z|^2): entries
 * (1/x_n!) int f(t) t^n w_q(t) dt.
 *
 * `growth` is the power-law growth of f, used to place quadrature panels.
 */
template<class F>
TruncatedOperator
quantize_radial(FockModel const& model, F&& f, double growth = 0)
{
    int const d = model.dim();
    Matrix m = Matrix::Zero(d, d);
    for (int n = 0; n < d; ++n)
    {
        double const lf = model.log_factorial(n);
        auto h = [&](double t) {
            return f(t) * std::exp(n * std::log(t) - lf);
        };
        m(n, n) = moment::integrate_against(model.weight(), h, n + growth)
                      .value;
    }
    return {m, OperatorLabel::A_radial, 0, "A_radial"};
}

//! Truncated Fourier series sum_{|k| <= K} c_k e^{i k theta}.
class FourierSeries
{
  public:
    //! Coefficients c_{-K}..c_K.
    explicit FourierSeries(std::vector<Complex> coefficients)
        : c_{std::move(coefficients)}
    {
        if (c_.size() % 2 == 0)
            throw InvalidSpec("Fourier series needs 2K + 1 coefficients");
    }

    //! Angle function theta on [0, 2 pi): c_0 = pi, c_k = i/k.
    static FourierSeries sawtooth(int order)
    {
        std::vector<Complex> c(2 * order + 1);
        c[order] = std::numbers::pi;
        for (int k = 1; k <= order; ++k)
        {
            c[order + k] = Complex(0, 1.0 / k);
            c[order - k] = Complex(0, -1.0 / k);
        }
        return FourierSeries(std::move(c));
    }

    static FourierSeries constant(Complex value)
    {
        return FourierSeries({value});
    }

    /*!
     * Coefficients of a 2 pi-periodic function from `samples` equispaced
     * values (trapezoid rule; exact for trigonometric polynomials of degree
     * below samples/2).  Real functions get c_{-k} = conj(c_k) exactly.
     */
    template<class G>
    static FourierSeries
    from_function(G&& g, int order, int samples, bool real_valued = true)
    {
        if (samples <= 2 * order)
            throw InvalidSpec("need more than 2K samples");
        std::vector<Complex> values(samples);
        for (int i = 0; i < samples; ++i)
            values[i] = g(2 * std::numbers::pi * i / samples);
        std::vector<Complex> c(2 * order + 1);
        for (int k = -order; k <= order; ++k)
        {
            if (real_valued && k < 0)
                continue;
            Complex sum = 0;
            for (int i = 0; i < samples; ++i)
                sum += values[i]
                       * std::polar(1.0, -2 * std::numbers::pi * k * i
                                             / samples);
            c[order + k] = sum / static_cast<double>(samples);
        }
        if (real_valued)
        {
            c[order] = c[order].real();
            for (int k = 1; k <= order; ++k)
                c[order - k] = std::conj(c[order + k]);
        }
        return FourierSeries(std::move(c));
    }

    int order() const { return static_cast<int>(c_.size() / 2); }

    Complex coefficient(int k) const
    {
        int const K = order();
        return std::abs(k) > K ? Complex(0) : c_[K + k];
    }

    Complex operator()(double theta) const
    {
        Complex sum = 0;
        for (int k = -order(); k <= order(); ++k)
            sum += coefficient(k) * std::polar(1.0, k * theta);
        return sum;
    }

  private:
    std::vector<Complex> c_;
};

//! x_{(n+n')/2}! / sqrt(x_n! x_{n'}!); bounded by 1.
inline double
angular_factor(FockModel const& model, int n, int np)
{
    return std::exp(model.log_factorial_half(n + np)
                    - 0.5 * (model.log_factorial(n) + model.log_factorial(np)));
}

//! (A_F)_{n n'} = c_{n'-n}(F) x_{(n+n')/2}! / sqrt(x_n! x_{n'}!)
inline TruncatedOperator
quantize_angular(FockModel const& model, FourierSeries const& F)
{
    int const d = model.dim();
    Matrix m = Matrix::Zero(d, d);
    for (int n = 0; n < d; ++n)
    {
        for (int np = 0; np < d; ++np)
        {
            Complex const c = F.coefficient(np - n);
            if (c != Complex(0))
                m(n, np) = c * angular_factor(model, n, np);
        }
    }
    return {m, OperatorLabel::A_angular, 0, "A_angular"};
}

//! Quantized angle: pi on the diagonal, i factor/(n'-n) off it.
inline TruncatedOperator angle_operator(FockModel const& model)
{
    int const d = model.dim();
    Matrix m = Matrix::Zero(d, d);
    for (int n = 0; n < d; ++n)
    {
        m(n, n) = std::numbers::pi;
        for (int np = n + 1; np < d; ++np)
        {
            Complex const v(0, angular_factor(model, n, np) / (np - n));
            m(n, np) = v;
            m(np, n) = std::conj(v);
        }
    }
    return {m, OperatorLabel::A_theta, 0, "A_theta"};
}

//---------------------------------------------------------------------------//
// Lower symbols
//---------------------------------------------------------------------------//

/*!
 * d_k(r) = (r^k / N(r^2)) sum_n x_{n+k/2}! / (x_n! x_{n+k}!) r^{2n}.
 *
 * Evaluated in log space over the stored series; lies in [0, 1].
 */
inline double d_k(FockModel const& model, int k, double r)
{
    if (k < 0 || !(r >= 0))
        throw OutOfDomain("d_k needs k >= 0 and r >= 0");
    if (k == 0)
        return 1;
    model.require_in_range(r * r, "d_k");
    if (r == 0)
        return 0;
    double const lr = std::log(r);
    double const ln_norm = model.log_normalization(r * r);
    int const last = model.series_size() - 1 - k;
    if (last < 0)
        throw OutOfDomain("d_k: k exceeds the stored series");
    double sum = 0;
    for (int n = 0; n <= last; ++n)
    {
        double const lterm = (2 * n + k) * lr + model.log_factorial_half(2 * n + k)
                             - model.log_factorial(n)
                             - model.log_factorial(n + k) - ln_norm;
        sum += std::exp(lterm);
    }
    return sum;
}

//! <v_z| A |v_z>
inline Complex lower_symbol(FockModel const& model,
                            TruncatedOperator const& op,
                            Complex z)
{
    auto const state = coherent_state(model, z);
    return state.coeffs.dot(op.matrix * state.coeffs);
}

//! Precomputed d_1..d_K at fixed r for evaluating the angle symbol in theta.
class AngleSymbol
{
  public:
    AngleSymbol(FockModel const& model, double r, int order)
    {
        if (order < 0)
            throw OutOfDomain("angle symbol order must be >= 0");
        d_.reserve(order);
        for (int k = 1; k <= order; ++k)
            d_.push_back(d_k(model, k, r));
    }

    //! pi - 2 sum_k d_k(r)/k sin(k theta)
    double operator()(double theta) const
    {
        double sum = 0;
        for (std::size_t i = 0; i < d_.size(); ++i)
        {
            double const k = static_cast<double>(i + 1);
            sum += d_[i] / k * std::sin(k * theta);
        }
        return std::numbers::pi - 2 * sum;
    }

    std::vector<double> const& coefficients() const { return d_; }

  private:
    std::vector<double> d_;
};

//! Angle lower symbol by its series; order defaults to N_max.
inline double angle_lower_symbol(FockModel const& model,
                                 double r,
                                 double theta,
                                 std::optional<int> order = std::nullopt)
{
    return AngleSymbol(model, r, order.value_or(model.n_max()))(theta);
}

//! c_0 + sum_{k != 0} d_|k|(r) c_k e^{i k theta}
inline Complex generic_F_lower_symbol(FockModel const& model,
                                      FourierSeries const& F,
                                      double r,
                                      double theta)
{
    Complex sum = F.coefficient(0);
    for (int k = 1; k <= F.order(); ++k)
    {
        double const d = d_k(model, k, r);
        sum += d
               * (F.coefficient(k) * std::polar(1.0, k * theta)
                  + F.coefficient(-k) * std::polar(1.0, -k * theta));
    }
    return sum;
}

//---------------------------------------------------------------------------//
// Dispersions
//---------------------------------------------------------------------------//

struct Dispersions
{
    double var_q{};  //!< (1/2) <x_{N+1} - x_N>
    double var_p{};
    double product{};
    double closed_form{};  //!< (1/2)|1/N + (s-1)|z|^2 - |z|^4 <1/x_{n+2}>|
    double operator_var_q{};  //!< <Q^2> - <Q>^2 from truncated matrices
    double operator_var_p{};
};

inline Dispersions dispersions(FockModel const& model, Complex z)
{
    double const t = std::norm(z);
    model.require_in_range(t, "dispersions");
    auto const rho = model.distribution(t);
    double mean_gap = 0;
    double mean_inv = 0;
    for (std::size_t n = 0; n + 2 < rho.size(); ++n)
    {
        mean_gap += rho[n] * model.gap(n);
        mean_inv += rho[n] / model.x(n + 2);
    }
    Dispersions out;
    out.var_q = 0.5 * mean_gap;
    out.var_p = 0.5 * mean_gap;
    out.product = out.var_q * out.var_p;
    double const inv_norm = std::exp(-model.log_normalization(t));
    out.closed_form = 0.5
                      * std::abs(inv_norm + (model.s_value() - 1) * t
                                 - t * t * mean_inv);

    auto const ops = ladder_and_quadratures(model);
    auto const state = coherent_state(model, z);
    auto const& v = state.coeffs;
    auto variance = [&](Matrix const& A) {
        Vector const Av = A * v;
        double const mean = v.dot(Av).real();
        return Av.squaredNorm() - mean * mean;
    };
    out.operator_var_q = variance(ops.Q.matrix);
    out.operator_var_p = variance(ops.P.matrix);
    return out;
}

//---------------------------------------------------------------------------//
// Dynamics
//---------------------------------------------------------------------------//

//! z sum_n rho(n) exp(i (x_{n+2} - x_{n+1}) t)
inline Complex
evolve_lower_symbol(FockModel const& model, Complex z, double time)
{
    double const t = std::norm(z);
    model.require_in_range(t, "evolve_lower_symbol");
    if (t == 0)
        return 0;
    auto const rho = model.distribution(t);
    Complex sum = 0;
    for (int n = 0; n + 2 < model.series_size(); ++n)
    {
        if (rho[n] == 0)
            continue;
        sum += rho[n] * std::polar(1.0, model.gap(n + 1) * time);
    }
    return z * sum;
}

/*!
 * Overlap density |<v_z| e^{-iHt} |v_z0>|^2 with phases x_{n+1} t:
 * |sum_n (zbar z0)^n e^{-i x_{n+1} t} / x_n!|^2 / (N(|z|^2) N(|z0|^2)).
 */
inline double phase_density(FockModel const& model,
                            Complex z0,
                            Complex z,
                            double time)
{
    double const t = std::norm(z);
    double const t0 = std::norm(z0);
    model.require_in_range(t, "phase_density");
    model.require_in_range(t0, "phase_density");
    double const half_norm
        = 0.5 * (model.log_normalization(t) + model.log_normalization(t0));
    Complex const w = std::conj(z) * z0;
    double const mag = std::abs(w);
    double const lw = mag > 0 ? std::log(mag) : detail::neg_inf;
    double const arg = mag > 0 ? std::arg(w) : 0.0;
    Complex sum = 0;
    for (int n = 0; n + 1 < model.series_size(); ++n)
    {
        if (n > 0 && mag == 0)
            break;
        double const lterm
            = (n == 0 ? 0.0 : n * lw) - model.log_factorial(n) - half_norm;
        sum += std::polar(std::exp(lterm), n * arg - model.x(n + 1) * time);
    }
    return std::norm(sum);
}

}  // namespace pisotcs::csquant
