// Command-line front end: writes the datasets behind each figure and table.

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pisotcs/figures.hpp"

namespace
{
namespace fig = pisotcs::figures;

constexpr int exit_usage = 2;
constexpr int exit_numerical = 3;

struct Options
{
    std::string target;
    std::vector<std::string> q;
    std::vector<double> z;
    std::string grid;
    std::vector<int> k;
    std::string z0{"1,1"};
    double time{0};
    double tol{pisotcs::csquant::default_model_tol};
    unsigned threads{0};
    std::string out;
    std::string format{"csv"};
    bool emit_plot{false};
};

pisotcs::csquant::Complex parse_complex(std::string const& text)
{
    auto const comma = text.find(',');
    try
    {
        std::size_t used = 0;
        if (comma == std::string::npos)
        {
            double const re = std::stod(text, &used);
            if (used != text.size())
                throw pisotcs::UsageError("bad complex number");
            return {re, 0};
        }
        std::string const a = text.substr(0, comma);
        std::string const b = text.substr(comma + 1);
        double const re = std::stod(a, &used);
        if (used != a.size())
            throw pisotcs::UsageError("bad real part");
        double const im = std::stod(b, &used);
        if (used != b.size())
            throw pisotcs::UsageError("bad imaginary part");
        return {re, im};
    }
    catch (std::logic_error const&)
    {
        throw pisotcs::UsageError("bad complex number '" + text
                                  + "': expected re or re,im");
    }
}

fig::FigureRequest make_request(Options const& opt)
{
    fig::FigureRequest req;
    req.target = opt.target;
    for (auto const& q : opt.q)
        req.qs.push_back(fig::QSpec::parse(q));
    req.z = opt.z;
    if (!opt.grid.empty())
        req.grid = fig::Grid::parse(opt.grid);
    req.k = opt.k;
    req.z0 = parse_complex(opt.z0);
    req.time = opt.time;
    if (!(opt.tol > 0 && opt.tol < 1))
        throw pisotcs::UsageError("tolerance must lie in (0, 1)");
    req.tol = opt.tol;
    req.threads = opt.threads;
    return req;
}

void write_output(Options const& opt,
                  fig::TargetInfo const& info,
                  fig::Dataset const& data)
{
    auto emit = [&](std::ostream& os) {
        if (opt.format == "json")
            data.write_json(os);
        else
            data.write_csv(os);
    };
    if (opt.out.empty())
    {
        emit(std::cout);
        return;
    }
    std::ofstream file(opt.out, std::ios::binary);
    if (!file)
        throw pisotcs::UsageError("cannot open '" + opt.out + "' for writing");
    emit(file);
    if (!file)
        throw pisotcs::Error("failed writing '" + opt.out + "'");
    if (opt.emit_plot)
    {
        std::string const script = opt.out + ".gp";
        std::ofstream gp(script, std::ios::binary);
        if (!gp)
            throw pisotcs::UsageError("cannot open '" + script + "'");
        if (opt.format == "json")
        {
            // The script reads the CSV form; write it alongside.
            std::string const csv = opt.out + ".csv";
            std::ofstream csv_file(csv, std::ios::binary);
            data.write_csv(csv_file);
            gp << fig::gnuplot_script(info, data, csv);
        }
        else
        {
            gp << fig::gnuplot_script(info, data, opt.out);
        }
    }
}

int run_target(Options const& opt)
{
    auto const* info = fig::find_target(opt.target);
    if (!info)
    {
        std::cerr << "pisotcs: unknown target '" << opt.target
                  << "'\navailable targets:\n"
                  << fig::list_targets();
        return exit_usage;
    }
    if (opt.emit_plot && opt.out.empty())
    {
        std::cerr << "pisotcs: --emit-plot needs --out\n";
        return exit_usage;
    }
    auto const start = std::chrono::steady_clock::now();
    auto const data = fig::run(make_request(opt));
    write_output(opt, *info, data);
    std::chrono::duration<double> const elapsed
        = std::chrono::steady_clock::now() - start;
    std::cerr << "pisotcs: " << info->name << " done in " << elapsed.count()
              << " s\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Datasets for Pisot q-coherent states"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_config("--config", "", "Read key=value options from a file");

    Options opt;
    app.add_option("--q", opt.q,
                   "Deformation: s:<int>, f:<int>, val:<real> or 1")
        ->take_all();
    app.add_option("--z", opt.z, "Values of |z|")->take_all();
    app.add_option("--grid", opt.grid, "Sample grid lo:hi:count");
    app.add_option("--k", opt.k, "Fourier orders (dkr, angle_symbol)")
        ->take_all();
    app.add_option("--z0", opt.z0, "Reference point re,im (phase_density)");
    app.add_option("--time", opt.time, "Evolution time (phase_density)");
    app.add_option("--tol", opt.tol, "Truncation tolerance")
        ->envname("PISOTCS_TOL");
    app.add_option("--threads", opt.threads, "Worker threads (0: all cores)");
    app.add_option("--out", opt.out, "Output path (default: stdout)");
    app.add_option("--format", opt.format, "Output format")
        ->check(CLI::IsMember({"csv", "json"}));
    app.add_flag("--emit-plot", opt.emit_plot,
                 "Also write a gnuplot script next to --out");

    auto* run = app.add_subcommand("run", "Compute one target");
    run->add_option("target", opt.target, "Target name (see 'list')")
        ->required();
    auto* list = app.add_subcommand("list", "List targets");

    try
    {
        app.parse(argc, argv);
    }
    catch (CLI::ParseError const& e)
    {
        int const code = app.exit(e);
        return code == 0 ? 0 : exit_usage;
    }

    if (list->parsed())
    {
        std::cout << fig::list_targets();
        return 0;
    }

    try
    {
        return run_target(opt);
    }
    catch (pisotcs::UsageError const& e)
    {
        std::cerr << "pisotcs: " << e.what() << '\n';
        return exit_usage;
    }
    catch (pisotcs::InvalidSpec const& e)
    {
        std::cerr << "pisotcs: " << e.what() << '\n';
        return exit_usage;
    }
    catch (pisotcs::DegenerateSpec const& e)
    {
        std::cerr << "pisotcs: " << e.what() << '\n';
        return exit_usage;
    }
    catch (pisotcs::OutOfDomain const& e)
    {
        std::cerr << "pisotcs: " << e.what() << '\n';
        return exit_usage;
    }
    catch (pisotcs::Error const& e)
    {
        std::cerr << "pisotcs: numerical failure: " << e.what() << '\n';
        return exit_numerical;
    }
    catch (std::exception const& e)
    {
        std::cerr << "pisotcs: " << e.what() << '\n';
        return 1;
    }
}
