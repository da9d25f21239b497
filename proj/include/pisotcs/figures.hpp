#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "csquant.hpp"
#include "detail/parallel.hpp"
#include "errors.hpp"
#include "moment.hpp"
#include "pisot_core.hpp"
#include "qcalc.hpp"

namespace pisotcs::figures
{
using csquant::Complex;

//---------------------------------------------------------------------------//
// Requests
//---------------------------------------------------------------------------//

/*!
 * One deformation parameter as given on the command line.
 *
 * - `s:3`: symmetric Pisot unit with integer s >= 3
 * - `f:2`: fermionic sequence with integer s >= 1 (integer data only)
 * - `val:x`: explicit real q > 0, stored as min(x, 1/x)
 * - `1`: the undeformed limit
 */
struct QSpec
{
    enum class Kind
    {
        pisot,
        fermionic,
        value,
        classical
    };

    Kind kind{Kind::classical};
    std::int64_t s{2};
    double q{1.0};
    std::string text{"1"};

    static QSpec pisot(std::int64_t s)
    {
        auto spec = DeformationSpec::bosonic(s);
        spec.validate();
        return {Kind::pisot, s, solve_unit_quadratic(spec).q,
                "s:" + std::to_string(s)};
    }

    static QSpec fermionic(std::int64_t s)
    {
        auto spec = DeformationSpec::fermionic(s);
        spec.validate();
        return {Kind::fermionic, s, solve_unit_quadratic(spec).q,
                "f:" + std::to_string(s)};
    }

    static QSpec classical() { return {}; }

    static QSpec parse(std::string const& text)
    {
        auto parse_int = [&](std::string_view digits) {
            std::int64_t v = 0;
            auto const* end = digits.data() + digits.size();
            auto [ptr, ec] = std::from_chars(digits.data(), end, v);
            if (ec != std::errc() || ptr != end)
                throw UsageError("bad q specifier '" + text + "'");
            return v;
        };
        try
        {
            if (text == "1")
                return classical();
            if (text.rfind("s:", 0) == 0)
                return pisot(parse_int(std::string_view(text).substr(2)));
            if (text.rfind("f:", 0) == 0)
                return fermionic(parse_int(std::string_view(text).substr(2)));
            if (text.rfind("val:", 0) == 0)
            {
                std::string_view const digits = std::string_view(text).substr(4);
                double v = 0;
                auto const* end = digits.data() + digits.size();
                auto [ptr, ec] = std::from_chars(digits.data(), end, v);
                if (ec != std::errc() || ptr != end || !(v > 0)
                    || !std::isfinite(v))
                    throw UsageError("bad q specifier '" + text
                                     + "': need val:<positive real>");
                double const q = std::min(v, 1 / v);
                if (q == 1.0)
                    return classical();
                return {Kind::value, 0, q, text};
            }
        }
        catch (DegenerateSpec const& e)
        {
            throw UsageError("q specifier '" + text + "': " + e.what());
        }
        catch (InvalidSpec const& e)
        {
            throw UsageError("q specifier '" + text + "': " + e.what());
        }
        throw UsageError("bad q specifier '" + text
                         + "': expected s:<int>, f:<int>, val:<real> or 1");
    }

    bool integer_data() const
    {
        return kind == Kind::pisot || kind == Kind::fermionic
               || kind == Kind::classical;
    }

    //! Coherent-state model; fermionic sequences have none.
    csquant::FockModel model(double z_max, double tol) const
    {
        switch (kind)
        {
            case Kind::pisot:
                return csquant::FockModel::pisot(s, z_max, tol);
            case Kind::classical:
                return csquant::FockModel::classical(z_max, tol);
            case Kind::value:
                return csquant::FockModel::generic(q, z_max, tol);
            case Kind::fermionic:
                break;
        }
        throw UsageError("q specifier '" + text
                         + "' has no coherent-state model");
    }
};

//! Inclusive uniform grid `lo:hi:count`.
struct Grid
{
    double lo{0};
    double hi{1};
    int count{2};

    static Grid parse(std::string const& text)
    {
        Grid g;
        std::istringstream in(text);
        std::string a, b, c;
        if (!std::getline(in, a, ':') || !std::getline(in, b, ':')
            || !std::getline(in, c))
            throw UsageError("bad grid '" + text + "': expected lo:hi:count");
        try
        {
            std::size_t used = 0;
            g.lo = std::stod(a, &used);
            if (used != a.size())
                throw UsageError("bad grid lower bound");
            g.hi = std::stod(b, &used);
            if (used != b.size())
                throw UsageError("bad grid upper bound");
            g.count = std::stoi(c, &used);
            if (used != c.size())
                throw UsageError("bad grid count");
        }
        catch (std::logic_error const&)
        {
            throw UsageError("bad grid '" + text + "': expected lo:hi:count");
        }
        g.validate();
        return g;
    }

    void validate() const
    {
        if (!std::isfinite(lo) || !std::isfinite(hi) || count < 1 || hi < lo)
            throw UsageError("grid needs finite lo <= hi and count >= 1");
        if (count > 1000000)
            throw UsageError("grid count too large");
    }

    std::vector<double> points() const
    {
        std::vector<double> p(count);
        for (int i = 0; i < count; ++i)
            p[i] = count == 1 ? lo : lo + (hi - lo) * i / (count - 1);
        return p;
    }

    //! Integer points, for grids over n.
    std::vector<int> integers() const
    {
        int const first = static_cast<int>(std::ceil(lo));
        int const last = static_cast<int>(std::floor(hi));
        if (first < 0)
            throw UsageError("integer grid needs lo >= 0");
        std::vector<int> v;
        for (int n = first; n <= last; ++n)
            v.push_back(n);
        return v;
    }
};

struct FigureRequest
{
    std::string target;
    std::vector<QSpec> qs;  //!< empty: target default
    std::vector<double> z;  //!< |z| values; empty: target default
    std::optional<Grid> grid;  //!< empty: target default
    std::vector<int> k;  //!< Fourier orders for dkr / angle_symbol
    Complex z0{1, 1};  //!< reference state for phase_density
    double time{0};  //!< evolution time for phase_density
    double tol{csquant::default_model_tol};
    unsigned threads{0};
};

//---------------------------------------------------------------------------//
// Datasets
//---------------------------------------------------------------------------//

//! Shortest round-trip decimal form; identical on every run.
inline std::string format_number(double v)
{
    if (std::isnan(v))
        return "nan";
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    if (v == 0)
        return "0";
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

class Dataset
{
  public:
    enum class CellKind
    {
        real,
        integer,
        text
    };

    struct Column
    {
        std::string name;
        CellKind kind{CellKind::real};
        std::vector<std::string> cells;
        std::vector<double> values;  //!< real columns only
    };

    void add_meta(std::string key, std::string value)
    {
        meta_.emplace_back(std::move(key), std::move(value));
    }

    void add_column(std::string name, std::vector<double> values)
    {
        Column c{std::move(name), CellKind::real, {}, std::move(values)};
        c.cells.reserve(c.values.size());
        for (double v : c.values)
            c.cells.push_back(format_number(v));
        push(std::move(c));
    }

    void add_integer_column(std::string name, std::vector<BigInt> const& v)
    {
        Column c{std::move(name), CellKind::integer, {}, {}};
        for (auto const& x : v)
            c.cells.push_back(x.str());
        push(std::move(c));
    }

    void add_text_column(std::string name, std::vector<std::string> cells)
    {
        push({std::move(name), CellKind::text, std::move(cells), {}});
    }

    //! Insert entries ahead of the existing metadata.
    void prepend_meta(std::vector<std::pair<std::string, std::string>> entries)
    {
        meta_.insert(meta_.begin(), entries.begin(), entries.end());
    }

    std::vector<std::pair<std::string, std::string>> const& metadata() const
    {
        return meta_;
    }
    std::vector<Column> const& columns() const { return columns_; }
    std::size_t rows() const
    {
        return columns_.empty() ? 0 : columns_.front().cells.size();
    }

    Column const& column(std::string const& name) const
    {
        for (auto const& c : columns_)
            if (c.name == name)
                return c;
        throw UsageError("no column named '" + name + "'");
    }

    //! `#`-prefixed metadata preamble, header row, then data rows.
    void write_csv(std::ostream& out) const
    {
        for (auto const& [k, v] : meta_)
            out << "# " << k << ": " << v << '\n';
        for (std::size_t j = 0; j < columns_.size(); ++j)
            out << (j ? "," : "") << quote(columns_[j].name);
        out << '\n';
        for (std::size_t i = 0; i < rows(); ++i)
        {
            for (std::size_t j = 0; j < columns_.size(); ++j)
            {
                auto const& c = columns_[j];
                out << (j ? "," : "")
                    << (c.kind == CellKind::text ? quote(c.cells[i])
                                                 : c.cells[i]);
            }
            out << '\n';
        }
    }

    void write_json(std::ostream& out) const
    {
        nlohmann::ordered_json doc;
        auto& meta = doc["metadata"] = nlohmann::ordered_json::object();
        for (auto const& [k, v] : meta_)
            meta[k] = v;
        auto& cols = doc["columns"] = nlohmann::ordered_json::array();
        for (auto const& c : columns_)
        {
            nlohmann::ordered_json col;
            col["name"] = c.name;
            auto& values = col["values"] = nlohmann::ordered_json::array();
            for (std::size_t i = 0; i < c.cells.size(); ++i)
            {
                switch (c.kind)
                {
                    case CellKind::real:
                        if (std::isfinite(c.values[i]))
                            values.push_back(c.values[i]);
                        else
                            values.push_back(nullptr);
                        break;
                    case CellKind::integer:
                        values.push_back(integer_json(c.cells[i]));
                        break;
                    case CellKind::text:
                        values.push_back(c.cells[i]);
                        break;
                }
            }
            cols.push_back(std::move(col));
        }
        out << doc.dump(2) << '\n';
    }

  private:
    void push(Column c)
    {
        if (!columns_.empty() && c.cells.size() != rows())
            throw Error("dataset column '" + c.name + "' has "
                        + std::to_string(c.cells.size()) + " rows, expected "
                        + std::to_string(rows()));
        columns_.push_back(std::move(c));
    }

    static std::string quote(std::string const& s)
    {
        if (s.find_first_of(",\"\n") == std::string::npos)
            return s;
        std::string out = "\"";
        for (char ch : s)
        {
            if (ch == '"')
                out += '"';
            out += ch;
        }
        return out + '"';
    }

    //! Integers beyond 64 bits stay exact as strings.
    static nlohmann::ordered_json integer_json(std::string const& digits)
    {
        std::int64_t v = 0;
        auto const* end = digits.data() + digits.size();
        auto [ptr, ec] = std::from_chars(digits.data(), end, v);
        if (ec == std::errc() && ptr == end)
            return v;
        return digits;
    }

    std::vector<std::pair<std::string, std::string>> meta_;
    std::vector<Column> columns_;
};

//---------------------------------------------------------------------------//
// Integer data shared by several targets
//---------------------------------------------------------------------------//

/*!
 * Row of the Pisot-number table, entries for n = 1..n_max.
 *
 * The s = 1 fermionic row is listed one step ahead (1, 2, 3, 5, ...), as in
 * the usual presentation of the Fibonacci numbers next to the other rows.
 */
inline std::vector<BigInt> table_row(DeformationSpec const& spec, int n_max)
{
    bool const shifted
        = spec.kind == DeformationKind::fermionic && spec.s == 1;
    auto seq = pisot_sequence(spec, n_max + (shifted ? 1 : 0));
    int const offset = shifted ? 1 : 0;
    return {seq.values.begin() + 1 + offset,
            seq.values.begin() + 1 + offset + n_max};
}

namespace detail
{
//! x_1..x_n_max as exact integers when the specifier has integer data.
inline std::vector<BigInt> integer_values(QSpec const& q, int n_max)
{
    switch (q.kind)
    {
        case QSpec::Kind::pisot:
            return table_row(DeformationSpec::bosonic(q.s), n_max);
        case QSpec::Kind::fermionic:
            return table_row(DeformationSpec::fermionic(q.s), n_max);
        case QSpec::Kind::classical: {
            std::vector<BigInt> v;
            for (int n = 1; n <= n_max; ++n)
                v.emplace_back(n);
            return v;
        }
        case QSpec::Kind::value:
            break;
    }
    throw UsageError("q specifier '" + q.text + "' has no integer data");
}

//! x_0..x_n_max in floating point.
inline std::vector<double> real_values(QSpec const& q, int n_max)
{
    std::vector<double> x(n_max + 1, 0.0);
    if (q.kind == QSpec::Kind::value)
    {
        for (int n = 1; n <= n_max; ++n)
            x[n] = deformed_integer(DeformationKind::symmetric, q.q, n);
        return x;
    }
    if (n_max == 0)
        return x;
    auto const exact = integer_values(q, n_max);
    for (int n = 1; n <= n_max; ++n)
        x[n] = exact[n - 1].convert_to<double>();
    return x;
}

//! ln x_0!..ln x_n_max!, from exact products for integer data.
inline std::vector<double> log_factorials(QSpec const& q, int n_max)
{
    std::vector<double> lf(n_max + 1, 0.0);
    if (q.kind == QSpec::Kind::value)
    {
        for (int n = 1; n <= n_max; ++n)
            lf[n] = lf[n - 1]
                    + std::log(deformed_integer(DeformationKind::symmetric,
                                                q.q, n));
        return lf;
    }
    if (n_max == 0)
        return lf;
    auto const exact = integer_values(q, n_max);
    BigInt prod = 1;
    for (int n = 1; n <= n_max; ++n)
    {
        prod *= exact[n - 1];
        lf[n] = log_of(prod);
    }
    return lf;
}

inline std::string join_labels(std::vector<QSpec> const& qs)
{
    std::string out;
    for (std::size_t i = 0; i < qs.size(); ++i)
        out += (i ? " " : "") + qs[i].text;
    return out;
}

inline std::string tag(QSpec const& q) { return "[" + q.text + "]"; }

inline std::string tag(QSpec const& q, char const* param, double v)
{
    return "[" + q.text + "," + param + "=" + format_number(v) + "]";
}

//! Evaluate f at every point in parallel, preserving index order.
template<class F>
std::vector<double>
sweep(std::vector<double> const& points, unsigned threads, F&& f)
{
    std::vector<double> out(points.size());
    pisotcs::detail::parallel_for(points.size(), threads,
                                  [&](std::size_t i) { out[i] = f(points[i]); });
    return out;
}

struct Context
{
    FigureRequest const& request;
    std::vector<QSpec> qs;
    std::vector<double> z;
    Grid grid;
    Dataset data;

    Context(FigureRequest const& req,
            std::vector<std::string> const& default_qs,
            std::vector<double> default_z,
            Grid default_grid)
        : request{req},
          qs{req.qs},
          z{req.z.empty() ? std::move(default_z) : req.z},
          grid{req.grid.value_or(default_grid)}
    {
        if (qs.empty())
        {
            for (auto const& text : default_qs)
                qs.push_back(QSpec::parse(text));
        }
        grid.validate();
        for (double v : z)
            if (!std::isfinite(v))
                throw UsageError("z values must be finite");
        data.add_meta("q", join_labels(qs));
        for (auto const& q : qs)
        {
            data.add_meta("q" + tag(q), format_number(q.q));
            if (q.kind == QSpec::Kind::pisot || q.kind == QSpec::Kind::fermionic)
                data.add_meta("s" + tag(q), std::to_string(q.s));
        }
    }

    csquant::FockModel model(QSpec const& q, double z_max)
    {
        auto m = q.model(z_max, request.tol);
        data.add_meta("N_max" + tag(q), std::to_string(m.n_max()));
        return m;
    }

    //! For targets that read --z as moduli |z|.
    void require_moduli() const
    {
        for (double v : z)
            if (v < 0)
                throw UsageError("|z| values must be >= 0");
    }

    double max_abs_z() const
    {
        double m = 0;
        for (double v : z)
            m = std::max(m, std::abs(v));
        return m;
    }
};

inline std::vector<double> as_doubles(std::vector<int> const& v)
{
    return {v.begin(), v.end()};
}

}  // namespace detail

//---------------------------------------------------------------------------//
// Targets
//---------------------------------------------------------------------------//

namespace targets
{
using detail::Context;

inline std::vector<std::string> const& paper_qs()
{
    static std::vector<std::string> const qs{"1", "s:3", "s:4", "s:5"};
    return qs;
}

inline Dataset table1(FigureRequest const& req)
{
    int const n_max = req.grid ? static_cast<int>(std::floor(req.grid->hi))
                               : 11;
    if (n_max < 1)
        throw UsageError("table1 needs n_max >= 1");
    struct Row
    {
        char const* name;
        DeformationSpec spec;
    };
    std::vector<Row> const rows{
        {"Fibonacci", DeformationSpec::fermionic(1)},
        {"q-fermionic", DeformationSpec::fermionic(2)},
        {"q-bosonic 1", DeformationSpec::bosonic(3)},
        {"q-bosonic 2", DeformationSpec::bosonic(4)},
        {"q-bosonic 3", DeformationSpec::bosonic(5)},
    };
    Dataset data;
    data.add_meta("n_max", std::to_string(n_max));
    std::vector<std::string> names;
    std::vector<BigInt> s_col, r_col;
    std::vector<std::vector<BigInt>> values;
    for (auto const& row : rows)
    {
        names.emplace_back(row.name);
        s_col.emplace_back(row.spec.s);
        r_col.emplace_back(row.spec.r);
        values.push_back(table_row(row.spec, n_max));
    }
    data.add_text_column("numbers", names);
    data.add_integer_column("s", s_col);
    data.add_integer_column("r", r_col);
    for (int n = 1; n <= n_max; ++n)
    {
        std::vector<BigInt> col;
        for (auto const& v : values)
            col.push_back(v[n - 1]);
        data.add_integer_column("n=" + std::to_string(n), col);
    }
    return data;
}

inline Dataset factorials(FigureRequest const& req)
{
    Context ctx(req, {"f:1", "f:2", "s:3", "s:4", "s:5", "1"}, {}, {0, 15, 16});
    auto const ns = ctx.grid.integers();
    int const n_max = ns.empty() ? 0 : ns.back();
    ctx.data.add_column("n", detail::as_doubles(ns));
    for (auto const& q : ctx.qs)
    {
        if (q.integer_data())
        {
            std::vector<BigInt> fact(n_max + 1, 1);
            if (n_max > 0)
            {
                auto const x = detail::integer_values(q, n_max);
                for (int n = 1; n <= n_max; ++n)
                    fact[n] = fact[n - 1] * x[n - 1];
            }
            std::vector<BigInt> col;
            for (int n : ns)
                col.push_back(fact[n]);
            ctx.data.add_integer_column("x_n!" + detail::tag(q), col);
        }
        else
        {
            auto const lf = detail::log_factorials(q, n_max);
            std::vector<double> col;
            for (int n : ns)
                col.push_back(std::exp(lf[n]));
            ctx.data.add_column("x_n!" + detail::tag(q), col);
        }
    }
    return std::move(ctx.data);
}

inline void require_symmetric(QSpec const& q, char const* target)
{
    if (q.kind == QSpec::Kind::fermionic)
        throw UsageError(std::string(target)
                         + " is defined for symmetric deformations only");
}

inline Dataset exp_e(FigureRequest const& req)
{
    Context ctx(req, paper_qs(), {}, {0, 4, 81});
    auto const t = ctx.grid.points();
    ctx.data.add_column("t", t);
    for (auto const& q : ctx.qs)
    {
        require_symmetric(q, "exp_e");
        ctx.data.add_column(
            "e" + detail::tag(q), detail::sweep(t, req.threads, [&](double x) {
                return qcalc::sym_exp(qcalc::SymExpKind::e_frak, q.q, x).value;
            }));
    }
    return std::move(ctx.data);
}

inline Dataset exp_E(FigureRequest const& req)
{
    Context ctx(req, paper_qs(), {}, {-4, 4, 161});
    auto const t = ctx.grid.points();
    ctx.data.add_column("t", t);
    for (auto const& q : ctx.qs)
    {
        require_symmetric(q, "exp_E");
        ctx.data.add_column(
            "E" + detail::tag(q), detail::sweep(t, req.threads, [&](double x) {
                return qcalc::sym_exp_product(q.q, x);
            }));
    }
    return std::move(ctx.data);
}

inline Dataset qgamma(FigureRequest const& req)
{
    Context ctx(req, paper_qs(), {}, {0.2, 5, 97});
    auto const x = ctx.grid.points();
    ctx.data.add_column("x", x);
    for (auto const& q : ctx.qs)
    {
        require_symmetric(q, "qgamma");
        ctx.data.add_column("gamma_q" + detail::tag(q),
                            detail::sweep(x, req.threads, [&](double v) {
                                return qcalc::q_gamma(q.q, v);
                            }));
        ctx.data.add_column("gamma_q2" + detail::tag(q),
                            detail::sweep(x, req.threads, [&](double v) {
                                return qcalc::q_gamma(q.q * q.q, v);
                            }));
    }
    return std::move(ctx.data);
}

inline Dataset gq_density(FigureRequest const& req)
{
    Context ctx(req, {"s:3"}, {}, {0.02, 4, 200});
    auto const t = ctx.grid.points();
    ctx.data.add_column("t", t);
    for (auto const& q : ctx.qs)
    {
        require_symmetric(q, "gq_density");
        if (q.kind == QSpec::Kind::classical)
            throw UsageError("gq_density needs q < 1");
        moment::WDensity const w(q.q);
        ctx.data.add_column("g" + detail::tag(q),
                            detail::sweep(t, req.threads, [&](double v) {
                                return moment::g_density(q.q, v);
                            }));
        ctx.data.add_column("w" + detail::tag(q),
                            detail::sweep(t, req.threads,
                                          [&](double v) { return w(v); }));
    }
    return std::move(ctx.data);
}

inline Dataset ratio_dq(FigureRequest const& req)
{
    Context ctx(req, paper_qs(), {}, {0, 20, 21});
    auto const ns = ctx.grid.integers();
    int const n_max = ns.empty() ? 0 : ns.back();
    ctx.data.add_column("n", detail::as_doubles(ns));
    for (auto const& q : ctx.qs)
    {
        require_symmetric(q, "ratio_dq");
        auto const lf = detail::log_factorials(q, n_max);
        std::vector<double> col;
        for (int n : ns)
            col.push_back(std::exp(lf[n] - std::lgamma(n + 1.0)));
        ctx.data.add_column("d" + detail::tag(q), col);
    }
    return std::move(ctx.data);
}

inline Dataset normalization(FigureRequest const& req)
{
    Context ctx(req, paper_qs(), {}, {0, 10, 101});
    auto const t = ctx.grid.points();
    if (t.front() < 0)
        throw UsageError("normalization needs t >= 0");
    ctx.data.add_column("t", t);
    for (auto const& q : ctx.qs)
    {
        auto const model = ctx.model(q, std::sqrt(ctx.grid.hi));
        ctx.data.add_column("N" + detail::tag(q),
                            detail::sweep(t, req.threads, [&](double v) {
                                return model.normalization(v);
                            }));
    }
    return std::move(ctx.data);
}

inline Dataset poisson(FigureRequest const& req)
{
    Context ctx(req, {"s:3", "s:4", "s:5", "1"}, {4, 5, 6}, {0, 40, 41});
    ctx.require_moduli();
    auto const ns = ctx.grid.integers();
    int const n_max = ns.empty() ? 0 : ns.back();
    ctx.data.add_column("n", detail::as_doubles(ns));
    for (auto const& q : ctx.qs)
    {
        auto const model = ctx.model(q, ctx.max_abs_z());
        auto const lf = detail::log_factorials(q, n_max);
        for (double r : ctx.z)
        {
            double const t = r * r;
            double const ln_norm = model.log_normalization(t);
            std::vector<double> col;
            for (int n : ns)
            {
                if (t == 0)
                    col.push_back(n == 0 ? 1.0 : 0.0);
                else
                    col.push_back(
                        std::exp(n * std::log(t) - lf[n] - ln_norm));
            }
            ctx.data.add_column("rho" + detail::tag(q, "|z|", r), col);
        }
    }
    return std::move(ctx.data);
}

inline Dataset mandel(FigureRequest const& req)
{
    Context ctx(req, {"s:3", "s:4", "s:5"}, {}, {0, 6, 61});
    auto const r = ctx.grid.points();
    ctx.data.add_column("|z|", r);
    for (auto const& q : ctx.qs)
    {
        auto const model = ctx.model(q, ctx.grid.hi);
        std::vector<double> number(r.size()), deformed(r.size());
        pisotcs::detail::parallel_for(r.size(), req.threads,
                                      [&](std::size_t i) {
            auto const st = csquant::photon_statistics(model, r[i]);
            number[i] = st.mandel;
            deformed[i] = st.mandel_deformed;
        });
        ctx.data.add_column("Q" + detail::tag(q), number);
        ctx.data.add_column("Q_xN" + detail::tag(q), deformed);
    }
    return std::move(ctx.data);
}

inline Dataset variance(FigureRequest const& req)
{
    Context ctx(req, paper_qs(), {}, {0, 6, 61});
    auto const r = ctx.grid.points();
    ctx.data.add_column("|z|", r);
    for (auto const& q : ctx.qs)
    {
        auto const model = ctx.model(q, ctx.grid.hi);
        std::vector<double> var(r.size()), closed(r.size());
        pisotcs::detail::parallel_for(r.size(), req.threads,
                                      [&](std::size_t i) {
            auto const d = csquant::dispersions(model, r[i]);
            var[i] = d.var_q;
            closed[i] = d.closed_form;
        });
        ctx.data.add_column("varQ" + detail::tag(q), var);
        ctx.data.add_column("varQ_closed" + detail::tag(q), closed);
    }
    return std::move(ctx.data);
}

inline Dataset characteristic(FigureRequest const& req)
{
    Context ctx(req, paper_qs(), {}, {1, 20, 20});
    auto const ns = ctx.grid.integers();
    if (!ns.empty() && ns.front() < 1)
        throw UsageError("characteristic needs n >= 1");
    int const n_max = ns.empty() ? 1 : ns.back();
    ctx.data.add_column("n", detail::as_doubles(ns));
    for (auto const& q : ctx.qs)
    {
        require_symmetric(q, "characteristic");
        auto const x = detail::real_values(q, n_max + 1);
        std::vector<double> col;
        for (int n : ns)
            col.push_back((x[n + 1] / x[n]) * (static_cast<double>(n) / (n + 1)));
        ctx.data.add_column("rho" + detail::tag(q), col);
    }
    return std::move(ctx.data);
}

inline Dataset snr(FigureRequest const& req)
{
    Context ctx(req, paper_qs(), {}, {0, 6, 61});
    auto const r = ctx.grid.points();
    ctx.data.add_column("|z|", r);
    for (auto const& q : ctx.qs)
    {
        auto const model = ctx.model(q, ctx.grid.hi);
        ctx.data.add_column("snr" + detail::tag(q),
                            detail::sweep(r, req.threads, [&](double v) {
                                return csquant::photon_statistics(model, v).snr;
                            }));
    }
    return std::move(ctx.data);
}

inline Dataset angle_symbol(FigureRequest const& req)
{
    Context ctx(req, {"1", "s:3"}, {0.5, 1, 5},
                {0, 2 * std::numbers::pi, 201});
    ctx.require_moduli();
    auto const theta = ctx.grid.points();
    ctx.data.add_column("theta", theta);
    for (auto const& q : ctx.qs)
    {
        auto const model = ctx.model(q, ctx.max_abs_z());
        int const order = req.k.empty() ? model.n_max() : req.k.front();
        for (double r : ctx.z)
        {
            csquant::AngleSymbol const symbol(model, std::abs(r), order);
            ctx.data.add_column(
                "theta_check" + detail::tag(q, "|z|", r),
                detail::sweep(theta, req.threads,
                              [&](double th) { return symbol(th); }));
        }
    }
    ctx.data.add_meta("K", req.k.empty() ? std::string("N_max")
                                         : std::to_string(req.k.front()));
    return std::move(ctx.data);
}

inline Dataset dkr(FigureRequest const& req)
{
    Context ctx(req, paper_qs(), {}, {0, 10, 101});
    auto const r = ctx.grid.points();
    if (r.front() < 0)
        throw UsageError("dkr needs r >= 0");
    std::vector<int> const ks = req.k.empty() ? std::vector<int>{1, 2, 4}
                                              : req.k;
    for (int k : ks)
        if (k < 0)
            throw UsageError("dkr needs k >= 0");
    ctx.data.add_column("r", r);
    for (auto const& q : ctx.qs)
    {
        auto const model = ctx.model(q, ctx.grid.hi);
        for (int k : ks)
        {
            ctx.data.add_column("d" + detail::tag(q, "k", k),
                                detail::sweep(r, req.threads, [&](double v) {
                                    return csquant::d_k(model, k, v);
                                }));
        }
    }
    return std::move(ctx.data);
}

inline Dataset trajectory(FigureRequest const& req)
{
    Context ctx(req, {"s:3", "s:4", "s:5", "1"}, {1},
                {0, 8 * std::numbers::pi, 1001});
    auto const t = ctx.grid.points();
    ctx.data.add_column("t", t);
    for (auto const& q : ctx.qs)
    {
        auto const model = ctx.model(q, ctx.max_abs_z());
        for (double z : ctx.z)
        {
            std::vector<Complex> path(t.size());
            pisotcs::detail::parallel_for(t.size(), req.threads,
                                          [&](std::size_t i) {
                path[i] = csquant::evolve_lower_symbol(model, z, t[i]);
            });
            std::vector<double> re, im;
            for (auto const& p : path)
            {
                re.push_back(p.real());
                im.push_back(p.imag());
            }
            ctx.data.add_column("re" + detail::tag(q, "z", z), re);
            ctx.data.add_column("im" + detail::tag(q, "z", z), im);
        }
    }
    return std::move(ctx.data);
}

inline Dataset phase_density(FigureRequest const& req)
{
    Context ctx(req, {"1", "s:3"}, {}, {-3, 3, 61});
    auto const axis = ctx.grid.points();
    std::vector<double> re, im;
    for (double y : axis)
    {
        for (double x : axis)
        {
            re.push_back(x);
            im.push_back(y);
        }
    }
    double z_max = std::abs(req.z0);
    for (double a : {ctx.grid.lo, ctx.grid.hi})
        for (double b : {ctx.grid.lo, ctx.grid.hi})
            z_max = std::max(z_max, std::abs(Complex(a, b)));
    ctx.data.add_meta("z0", format_number(req.z0.real()) + ","
                                + format_number(req.z0.imag()));
    ctx.data.add_meta("time", format_number(req.time));
    ctx.data.add_column("re", re);
    ctx.data.add_column("im", im);
    for (auto const& q : ctx.qs)
    {
        auto const model = ctx.model(q, z_max);
        std::vector<double> rho(re.size());
        pisotcs::detail::parallel_for(re.size(), req.threads,
                                      [&](std::size_t i) {
            rho[i] = csquant::phase_density(
                model, req.z0, Complex(re[i], im[i]), req.time);
        });
        ctx.data.add_column("rho" + detail::tag(q), rho);
    }
    return std::move(ctx.data);
}

}  // namespace targets

enum class PlotStyle
{
    lines,
    surface,
    table
};

struct TargetInfo
{
    char const* name;
    char const* figure;
    char const* description;
    PlotStyle style;
    Dataset (*run)(FigureRequest const&);
};

inline std::vector<TargetInfo> const& target_table()
{
    static std::vector<TargetInfo> const table{
        {"table1", "Table 1", "quadratic Pisot sequences for n = 1..11",
         PlotStyle::table, targets::table1},
        {"factorials", "Fig. 1", "deformed factorials x_n! versus n",
         PlotStyle::lines, targets::factorials},
        {"exp_e", "Fig. 2", "symmetric exponential e_q(t)", PlotStyle::lines,
         targets::exp_e},
        {"exp_E", "Fig. 3", "auxiliary exponential E_q(t)", PlotStyle::lines,
         targets::exp_E},
        {"qgamma", "Fig. 4", "Gamma_q(x) and Gamma_{q^2}(x)",
         PlotStyle::lines, targets::qgamma},
        {"gq_density", "Fig. 5", "log-normal density g_q(t) and weight w_q(t)",
         PlotStyle::lines, targets::gq_density},
        {"ratio_dq", "Fig. 6a", "ratio d_q(n) = x_n!/n!", PlotStyle::lines,
         targets::ratio_dq},
        {"normalization", "Fig. 6b", "normalization N_q(t)", PlotStyle::lines,
         targets::normalization},
        {"poisson", "Fig. 7", "Poisson-like distributions rho_q(n,|z|)",
         PlotStyle::lines, targets::poisson},
        {"mandel", "Fig. 8", "Mandel parameter versus |z|", PlotStyle::lines,
         targets::mandel},
        {"variance", "Fig. 9", "quadrature variance (Delta Q)^2 versus |z|",
         PlotStyle::lines, targets::variance},
        {"characteristic", "Fig. 10", "characteristic functional rho_q(n)",
         PlotStyle::lines, targets::characteristic},
        {"snr", "Fig. 11", "signal-to-quantum-noise ratio versus |z|",
         PlotStyle::lines, targets::snr},
        {"angle_symbol", "Figs. 12-14", "lower symbol of the angle operator",
         PlotStyle::lines, targets::angle_symbol},
        {"dkr", "Figs. 15-16", "angle coefficients d_k(r)", PlotStyle::lines,
         targets::dkr},
        {"trajectory", "Figs. 17-18, 21-22",
         "phase-space trajectories Re/Im of z(t)", PlotStyle::lines,
         targets::trajectory},
        {"phase_density", "Figs. 19-20",
         "phase-space density rho_{z0}(z) at fixed time", PlotStyle::surface,
         targets::phase_density},
    };
    return table;
}

inline TargetInfo const* find_target(std::string_view name)
{
    for (auto const& t : target_table())
        if (name == t.name)
            return &t;
    return nullptr;
}

inline std::string list_targets()
{
    std::ostringstream out;
    for (auto const& t : target_table())
    {
        std::string name = t.name;
        name.resize(16, ' ');
        std::string fig = t.figure;
        fig.resize(20, ' ');
        out << name << fig << t.description << '\n';
    }
    return out.str();
}

inline Dataset run(FigureRequest const& request)
{
    auto const* info = find_target(request.target);
    if (!info)
        throw UsageError("unknown target '" + request.target + "'");
    Dataset data = info->run(request);
    data.prepend_meta({{"target", info->name},
                       {"figure", info->figure},
                       {"tol", format_number(request.tol)}});
    return data;
}

//! gnuplot script plotting a CSV written by Dataset::write_csv.
inline std::string gnuplot_script(TargetInfo const& info,
                                  Dataset const& data,
                                  std::string const& csv_path)
{
    std::ostringstream out;
    out << "# " << info.name << " (" << info.figure << "): "
        << info.description << '\n';
    out << "set datafile separator ','\n";
    out << "set datafile commentschars '#'\n";
    out << "set key outside right\n";
    out << "set title '" << info.name << "'\n";
    auto const& cols = data.columns();
    auto escape = [](std::string s) {
        std::string out;
        for (char ch : s)
        {
            if (ch == '\'')
                out += "''";
            else
                out += ch;
        }
        return out;
    };
    if (info.style == PlotStyle::surface)
    {
        out << "set view map\nset pm3d at b\nunset surface\n";
        out << "set xlabel 'Re z'\nset ylabel 'Im z'\n";
        out << "splot '" << escape(csv_path)
            << "' every ::1 using 1:2:3 with pm3d title '"
            << escape(cols.size() > 2 ? cols[2].name : "") << "'\n";
        return out.str();
    }
    if (info.style == PlotStyle::table)
    {
        // One curve per n column, against the row index.
        out << "set logscale y\nset xlabel 'row'\n";
        out << "plot for [c=4:" << cols.size() << "] '" << escape(csv_path)
            << "' every ::1 using 0:c with linespoints "
            << "title columnhead(c)\n";
        return out.str();
    }
    out << "set xlabel '" << escape(cols.front().name) << "'\n";
    out << "plot ";
    for (std::size_t j = 1; j < cols.size(); ++j)
    {
        out << (j > 1 ? ", \\\n     " : "") << "'" << escape(csv_path)
            << "' every ::1 using 1:" << j + 1 << " with lines title '"
            << escape(cols[j].name) << "'";
    }
    out << '\n';
    return out.str();
}

}  // namespace pisotcs::figures
