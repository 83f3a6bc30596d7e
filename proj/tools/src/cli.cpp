#include "kernelpa/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include "kernelpa/dpd.hpp"
#include "kernelpa/error.hpp"
#include "kernelpa/metrics.hpp"
#include "kernelpa/model_io.hpp"
#include "kernelpa/npmodel.hpp"
#include "kernelpa/parametric.hpp"
#include "kernelpa/refpa.hpp"
#include "kernelpa/signal.hpp"
#include "kernelpa/signal_io.hpp"

namespace kernelpa::cli {
namespace {

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string one_line(std::string s) {
    std::replace_if(s.begin(), s.end(), [](char c) { return c == '\n' || c == '\r'; }, ' ');
    while (!s.empty() && s.back() == ' ') s.pop_back();
    return s;
}

std::string num(double v) {
    char buf[32];
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return ec == std::errc{} ? std::string(buf, p) : std::string("nan");
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

std::vector<std::string> split_list(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream in(s);
    std::string item;
    while (std::getline(in, item, sep)) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

double to_double(const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != s.size() || s.empty()) throw UsageError("not a number: '" + s + "'");
    return v;
}

int to_int(const std::string& s) {
    int v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size() || s.empty()) throw UsageError("not an integer: '" + s + "'");
    return v;
}

// "a:b,c:d" -> pairs.
std::vector<std::pair<int, int>> parse_pairs(const std::string& s, const char* what) {
    std::vector<std::pair<int, int>> out;
    for (const auto& item : split_list(s, ',')) {
        const auto parts = split_list(item, ':');
        if (parts.size() != 2) throw UsageError(std::string(what) + ": expected 'a:b' items, got '" + item + "'");
        out.emplace_back(to_int(parts[0]), to_int(parts[1]));
    }
    if (out.empty()) throw UsageError(std::string(what) + ": empty list");
    return out;
}

// key = value lines, '#' comments. Keys may use '_' or '-'.
std::map<std::string, std::string> read_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file '" + path + "'");
    std::map<std::string, std::string> out;
    std::string line;
    int no = 0;
    while (std::getline(in, line)) {
        ++no;
        if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw FormatError(path + ":" + std::to_string(no) + ": expected key = value");
        std::string key = trim(line.substr(0, eq));
        while (!key.empty() && key.front() == '-') key.erase(key.begin());
        std::replace(key.begin(), key.end(), '_', '-');
        if (key.empty() || key == "config") throw FormatError(path + ":" + std::to_string(no) + ": invalid key");
        if (!out.emplace(key, trim(line.substr(eq + 1))).second)
            throw FormatError(path + ":" + std::to_string(no) + ": duplicate key '" + key + "'");
    }
    return out;
}

bool mentions(const std::vector<std::string>& args, const std::string& key) {
    const std::string flag = "--" + key;
    return std::any_of(args.begin(), args.end(), [&](const std::string& a) {
        return a == flag || a.rfind(flag + "=", 0) == 0;
    });
}

// Values from --config are inserted for every option not given explicitly.
std::vector<std::string> expand_config(const std::vector<std::string>& args) {
    std::optional<std::string> path;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config") {
            if (i + 1 >= args.size()) throw UsageError("--config needs a file");
            path = args[i + 1];
        } else if (args[i].rfind("--config=", 0) == 0) {
            path = args[i].substr(9);
        }
    }
    if (!path) return args;
    std::vector<std::string> out;
    std::size_t start = 0;
    if (!args.empty() && args[0].rfind('-', 0) != 0) {
        out.push_back(args[0]);
        start = 1;
    }
    for (const auto& [key, value] : read_config(*path))
        if (!mentions(args, key)) out.push_back("--" + key + "=" + value);
    out.insert(out.end(), args.begin() + static_cast<std::ptrdiff_t>(start), args.end());
    return out;
}

struct Options {
    std::string input, measured, output, model, config, pa_config, long_output;
    std::string format = "bin";
    std::string split = "validation";
    std::string orders = "0:7,1:1,2:1";
    std::string terms = "0:1,0:2,0:3,0:4,1:1,2:1";
    std::string domain = "original";
    std::string t_list = "30,70,110";
    std::string delta_list = "0.001,0.0142857142857142857,0.05";
    int m_depth = 3;
    int p_max = 3;
    std::size_t grid_points = 70;
    double aperture_frac = 1.0 / 70.0;
    double est_frac = 0.10;
    bool refine = false;
    std::uint64_t seed = 1;
    std::size_t n_samples = 100000;
    double sample_rate = 400e6;
    double bandwidth = 24e6;
    double channel_bw = 0.0;
    double threshold = -0.1;
    std::optional<double> papr_target;
    std::optional<double> noise_floor;
};

FitOptions fit_options(const Options& o) {
    FitOptions f;
    f.memory_depth = o.m_depth;
    f.max_dimension = o.p_max;
    f.grid_points = o.grid_points;
    f.aperture_fraction = o.aperture_frac;
    f.refine = o.refine;
    return f;
}

IqFormat iq_format(const Options& o) { return o.format == "csv" ? IqFormat::Csv : IqFormat::Binary; }

struct Split {
    ComplexSignal estimation;
    ComplexSignal validation;
};

Split split_record(const ComplexSignal& s, double fraction) {
    if (!(fraction > 0.0 && fraction < 1.0)) throw ParameterError("--est-frac must lie in (0, 1)");
    const auto n_est = static_cast<std::size_t>(std::floor(fraction * static_cast<double>(s.size())));
    if (n_est == 0 || n_est >= s.size()) throw ParameterError("estimation split leaves an empty part");
    return {s.slice(0, n_est), s.slice(n_est, s.size() - n_est)};
}

ComplexSignal pick(const ComplexSignal& s, const Options& o) {
    if (o.split == "all") return s;
    auto parts = split_record(s, o.est_frac);
    return o.split == "estimation" ? parts.estimation : parts.validation;
}

void check_pair(const ComplexSignal& u, const ComplexSignal& y) {
    if (u.sample_rate() != y.sample_rate())
        throw ParameterError("sample rates disagree: " + num(u.sample_rate()) + " vs " + num(y.sample_rate()));
    if (u.size() != y.size())
        throw ParameterError("record lengths disagree: " + std::to_string(u.size()) + " vs " + std::to_string(y.size()));
}

std::vector<ParametricTerm> parse_terms(const std::string& s) {
    std::vector<ParametricTerm> out;
    for (auto [lag, p] : parse_pairs(s, "--terms")) out.push_back(ParametricTerm{lag, p});
    return out;
}

std::string long_path(const Options& o) {
    if (!o.long_output.empty()) return o.long_output;
    const auto dot = o.output.rfind('.');
    const auto slash = o.output.rfind('/');
    if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) return o.output + "_long";
    return o.output.substr(0, dot) + "_long" + o.output.substr(dot);
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot open '" + path + "' for writing");
    f << text;
    if (!f) throw IoError("write to '" + path + "' failed");
}

// Verbs -------------------------------------------------------------------

void cmd_generate(const Options& o, std::ostream& out) {
    auto s = generate_signal(o.n_samples, o.sample_rate, o.bandwidth, o.seed);
    out << "papr_db=" << num(papr(s)) << "\n";
    if (o.papr_target) {
        s = clip(s, *o.papr_target);
        out << "clipped_papr_db=" << num(papr(s)) << "\n";
    }
    write_iq(o.output, s, iq_format(o));
    out << "samples=" << s.size() << "\n";
}

void cmd_simulate(const Options& o, std::ostream& out, const std::function<bool(const char*)>& given) {
    const auto u = read_iq(o.input);
    auto cfg = o.pa_config.empty() ? default_config() : load_pa_config(o.pa_config);
    if (given("--seed")) cfg.seed = o.seed;
    if (o.noise_floor) cfg.noise_floor_db = *o.noise_floor;
    const auto y = reference_pa(u, cfg);
    write_iq(o.output, y, iq_format(o));
    out << "output_power=" << num(y.mean_power()) << "\n";
}

void cmd_fit(const Options& o, std::ostream& out) {
    const auto u = read_iq(o.input);
    const auto y = read_iq(o.measured);
    check_pair(u, y);
    const auto su = split_record(u, o.est_frac);
    const auto sy = split_record(y, o.est_frac);
    const auto m = fit(su.estimation, sy.estimation, fit_options(o));
    save_model(o.model, m);
    out << "training_nmse_db=" << num(nmse(sy.estimation, predict(m, su.estimation))) << "\n";
    out << "validation_nmse_db=" << num(nmse(sy.validation, predict(m, su.validation))) << "\n";
    out << "bases=" << m.entries.size() << " active=" << m.active_count() << "\n";
}

void cmd_analyze(const Options& o, std::ostream& out) {
    const auto m = load_npmodel(o.model);
    const auto u = read_iq(o.input);
    const auto y = read_iq(o.measured);
    check_pair(u, y);
    const auto report = contribution_table(m, pick(u, o), pick(y, o), o.channel_bw);
    write_report_text(out, report);
    if (!o.output.empty()) {
        std::ostringstream csv;
        write_report_csv(csv, report);
        write_file(o.output, csv.str());
    }
}

void cmd_prune(const Options& o, std::ostream& out) {
    const auto m = load_npmodel(o.model);
    const auto u = read_iq(o.input);
    const auto y = read_iq(o.measured);
    check_pair(u, y);
    const auto pu = pick(u, o);
    const auto py = pick(y, o);
    const auto report = contribution_table(m, pu, py, o.channel_bw);
    const auto pruned = prune(m, report, o.threshold);
    save_model(o.output, pruned);
    out << "nmse_before_db=" << num(report.total_nmse_db) << "\n";
    out << "nmse_after_db=" << num(nmse(py, predict(pruned, pu))) << "\n";
    out << "active_before=" << m.active_count() << " active_after=" << pruned.active_count() << "\n";
}

void cmd_extract(const Options& o, std::ostream& out) {
    const auto m = load_npmodel(o.model);
    auto result = extract_parametric(m, parse_pairs(o.orders, "--orders"));
    const auto model = o.domain == "orthogonal" ? result.model : to_original_domain(result.model);
    save_model(o.output, model);
    for (std::size_t i = 0; i < result.residual_db.size(); ++i) out << "fit_residual_db=" << num(result.residual_db[i]) << "\n";
    out << "terms=" << model.terms.size() << "\n";
    out << "flops_per_sample=" << flops_per_sample(model) << "\n";
}

void cmd_identify(const Options& o, std::ostream& out) {
    const auto u = read_iq(o.input);
    const auto y = read_iq(o.measured);
    check_pair(u, y);
    const auto su = split_record(u, o.est_frac);
    const auto sy = split_record(y, o.est_frac);
    const auto m = identify_least_squares(parse_terms(o.terms), su.estimation, sy.estimation);
    save_model(o.output, m);
    out << "training_nmse_db=" << num(*m.training_nmse_db) << "\n";
    out << "validation_nmse_db=" << num(nmse(sy.validation, predict(m, su.validation))) << "\n";
    out << "flops_per_sample=" << flops_per_sample(m) << "\n";
}

void cmd_predict(const Options& o, std::ostream& out) {
    const auto u = read_iq(o.input);
    std::ifstream f(o.model, std::ios::binary);
    if (!f) throw IoError("cannot open model '" + o.model + "'");
    std::stringstream text;
    text << f.rdbuf();
    const auto body = text.str();
    std::optional<ComplexSignal> y;
    switch (detect_model_kind(body)) {
        case ModelKind::NonParametric: y = predict(npmodel_from_text(body), u); break;
        case ModelKind::Parametric: y = predict(parametric_from_text(body), u); break;
        case ModelKind::Dpd: y = dpd_apply(dpd_from_text(body), u); break;
    }
    write_iq(o.output, *y, iq_format(o));
    out << "samples=" << y->size() << " warmup=" << y->warmup() << "\n";
}

void cmd_metrics(const Options& o, std::ostream& out) {
    const auto ref = pick(read_iq(o.input), o);
    out << "papr_db=" << num(papr(ref)) << "\n";
    out << "mean_power=" << num(ref.mean_power()) << "\n";
    if (o.measured.empty()) return;
    const auto est = pick(read_iq(o.measured), o);
    check_pair(ref, est);
    const double bw = o.channel_bw > 0.0 ? o.channel_bw : ref.bandwidth();
    out << "nmse_db=" << num(nmse(ref, est)) << "\n";
    out << "acepr_db=" << num(acepr(ref, est, bw)) << "\n";
}

void cmd_dpd_train(const Options& o, std::ostream& out) {
    const auto u = read_iq(o.input);
    const auto y = read_iq(o.measured);
    check_pair(u, y);
    const auto d = dpd_train(u, y, fit_options(o));
    save_model(o.model, d);
    out << "gain=" << num(d.gain.real()) << "," << num(d.gain.imag()) << "\n";
}

void cmd_dpd_apply(const Options& o, std::ostream& out) {
    const auto d = load_dpd(o.model);
    const auto u = read_iq(o.input);
    const auto x = dpd_apply(d, u);
    write_iq(o.output, x, iq_format(o));
    out << "input_papr_db=" << num(papr(u)) << " output_papr_db=" << num(papr(x)) << "\n";
}

void cmd_sweep(const Options& o, std::ostream& out) {
    const auto u = read_iq(o.input);
    const auto y = read_iq(o.measured);
    check_pair(u, y);
    const auto su = split_record(u, o.est_frac);
    const auto sy = split_record(y, o.est_frac);

    std::vector<std::size_t> ts;
    for (const auto& t : split_list(o.t_list, ',')) {
        const int v = to_int(t);
        if (v < 2) throw UsageError("--t-list entries must be >= 2");
        ts.push_back(static_cast<std::size_t>(v));
    }
    std::vector<double> ds;
    for (const auto& d : split_list(o.delta_list, ',')) ds.push_back(to_double(d));
    if (ts.empty() || ds.empty()) throw UsageError("--t-list and --delta-list must not be empty");

    std::string grid = "grid_points";
    for (double d : ds) grid += "," + num(d);
    grid += "\n";
    std::string long_form = "grid_points,aperture_fraction,nmse_db\n";
    std::size_t failed = 0;
    for (auto t : ts) {
        grid += std::to_string(t);
        for (double d : ds) {
            std::string cell;
            try {
                auto opts = fit_options(o);
                opts.grid_points = t;
                opts.aperture_fraction = d;
                const auto m = fit(su.estimation, sy.estimation, opts);
                cell = num(nmse(sy.validation, predict(m, su.validation)));
            } catch (const Error&) {
                ++failed;
            }
            grid += "," + cell;
            long_form += std::to_string(t) + "," + num(d) + "," + cell + "\n";
        }
        grid += "\n";
    }
    write_file(o.output, grid);
    write_file(long_path(o), long_form);
    out << "cells=" << ts.size() * ds.size() << " failed=" << failed << "\n";
}

}  // namespace

int run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
    Options o;
    CLI::App app{"Kernel-smoothing PA behavioral modeling and DPD", "kernelpa"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "Help for every verb");

    const std::vector<std::string> formats{"bin", "csv"};
    const std::vector<std::string> splits{"all", "estimation", "validation"};

    auto add_input = [&](CLI::App* c, bool required = true) {
        auto* opt = c->add_option("--input", o.input, "Input IQ record");
        if (required) opt->required();
    };
    auto add_measured = [&](CLI::App* c, bool required = true) {
        auto* opt = c->add_option("--measured", o.measured, "Measured (PA output) IQ record");
        if (required) opt->required();
    };
    auto add_format = [&](CLI::App* c) {
        c->add_option("--format", o.format, "Payload format of written records")->check(CLI::IsMember(formats));
    };
    auto add_fit = [&](CLI::App* c, bool grid = true) {
        c->add_option("--m-depth", o.m_depth, "Memory depth M")->capture_default_str();
        c->add_option("--p-max", o.p_max, "Largest lag-subset size")->capture_default_str();
        if (grid) {
            c->add_option("--grid-points", o.grid_points, "Kernel grid points T")->capture_default_str();
            c->add_option("--aperture-frac", o.aperture_frac, "Kernel aperture as a fraction of the span")->capture_default_str();
        }
        c->add_flag("--refine", o.refine, "Second estimation pass on the residual");
    };
    auto add_est = [&](CLI::App* c) {
        c->add_option("--est-frac", o.est_frac, "Leading fraction used for estimation")->capture_default_str();
    };
    auto add_split = [&](CLI::App* c) {
        add_est(c);
        c->add_option("--split", o.split, "Part of the record to evaluate")->check(CLI::IsMember(splits))->capture_default_str();
    };
    auto add_config = [&](CLI::App* c) {
        c->add_option("--config", o.config, "key=value file; explicit flags take precedence");
        c->add_option("--seed", o.seed, "Random seed")->capture_default_str();
    };

    auto* gen = app.add_subcommand("generate", "Band-limited noise excitation");
    gen->add_option("--output", o.output, "Output IQ record")->required();
    gen->add_option("--n-samples", o.n_samples, "Record length")->capture_default_str();
    gen->add_option("--sample-rate", o.sample_rate, "Sample rate [Hz]")->capture_default_str();
    gen->add_option("--bandwidth", o.bandwidth, "Occupied bandwidth [Hz]")->capture_default_str();
    gen->add_option("--papr-target", o.papr_target, "Clip-and-filter to this PAPR [dB]");
    add_format(gen);
    add_config(gen);

    auto* sim = app.add_subcommand("simulate", "Drive the reference PA");
    add_input(sim);
    sim->add_option("--output", o.output, "PA output record")->required();
    sim->add_option("--pa-config", o.pa_config, "Reference PA config file (default coefficients otherwise)");
    sim->add_option("--noise-floor", o.noise_floor, "Additive noise relative to output power [dB]");
    add_format(sim);
    add_config(sim);

    auto* fitc = app.add_subcommand("fit", "Fit a non-parametric model on the estimation split");
    add_input(fitc);
    add_measured(fitc);
    fitc->add_option("--model", o.model, "Model file to write")->required();
    add_fit(fitc);
    add_est(fitc);
    add_config(fitc);

    auto* ana = app.add_subcommand("analyze", "Per-basis contribution table");
    ana->add_option("--model", o.model, "Non-parametric model")->required();
    add_input(ana);
    add_measured(ana);
    ana->add_option("--output", o.output, "CSV report");
    ana->add_option("--channel-bw", o.channel_bw, "ACEPR channel bandwidth [Hz] (record bandwidth otherwise)");
    add_split(ana);
    add_config(ana);

    auto* pr = app.add_subcommand("prune", "Deactivate non-contributing bases");
    pr->add_option("--model", o.model, "Non-parametric model")->required();
    add_input(pr);
    add_measured(pr);
    pr->add_option("--output", o.output, "Pruned model file")->required();
    pr->add_option("--threshold", o.threshold, "Contribution threshold [dB], negative")->capture_default_str();
    pr->add_option("--channel-bw", o.channel_bw, "ACEPR channel bandwidth [Hz]");
    add_split(pr);
    add_config(pr);

    auto* ex = app.add_subcommand("extract", "Polynomial models of single-lag kernel estimates");
    ex->add_option("--model", o.model, "Non-parametric model")->required();
    ex->add_option("--orders", o.orders, "lag:order list")->capture_default_str();
    ex->add_option("--domain", o.domain, "Domain of the written model")
        ->check(CLI::IsMember(std::vector<std::string>{"original", "orthogonal"}))
        ->capture_default_str();
    ex->add_option("--output", o.output, "Parametric model file")->required();
    add_config(ex);

    auto* id = app.add_subcommand("identify", "Least-squares parametric model");
    add_input(id);
    add_measured(id);
    id->add_option("--terms", o.terms, "lag:p list, term u(n-lag)|u(n-lag)|^(2(p-1))")->capture_default_str();
    id->add_option("--output", o.output, "Parametric model file")->required();
    add_est(id);
    add_config(id);

    auto* pd = app.add_subcommand("predict", "Evaluate a model file on a record");
    pd->add_option("--model", o.model, "Model file (any kind)")->required();
    add_input(pd);
    pd->add_option("--output", o.output, "Predicted record")->required();
    add_format(pd);
    add_config(pd);

    auto* me = app.add_subcommand("metrics", "PAPR, NMSE and ACEPR");
    me->add_option("--input", o.input, "Reference record")->required();
    me->add_option("--measured", o.measured, "Record compared with the reference");
    me->add_option("--channel-bw", o.channel_bw, "ACEPR channel bandwidth [Hz]");
    add_est(me);
    me->add_option("--split", o.split, "Part of the record to evaluate (default all)")->check(CLI::IsMember(splits));
    add_config(me);

    auto* dt = app.add_subcommand("dpd-train", "Inverse-learning pre-distorter");
    add_input(dt);
    add_measured(dt);
    dt->add_option("--model", o.model, "DPD model file to write")->required();
    add_fit(dt);
    add_config(dt);

    auto* da = app.add_subcommand("dpd-apply", "Pre-distort a record");
    da->add_option("--model", o.model, "DPD model file")->required();
    add_input(da);
    da->add_option("--output", o.output, "Pre-distorted record")->required();
    add_format(da);
    add_config(da);

    auto* sw = app.add_subcommand("sweep", "Validation NMSE over grid points and apertures");
    add_input(sw);
    add_measured(sw);
    sw->add_option("--t-list", o.t_list, "Grid point counts")->capture_default_str();
    sw->add_option("--delta-list", o.delta_list, "Aperture fractions")->capture_default_str();
    sw->add_option("--output", o.output, "CSV grid (rows T, columns delta)")->required();
    sw->add_option("--long-output", o.long_output, "Long-format CSV (default <output>_long)");
    add_fit(sw, false);
    add_est(sw);
    add_config(sw);

    try {
        auto args = expand_config(raw_args);
        std::reverse(args.begin(), args.end());
        app.parse(std::move(args));
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        err << "error kind=usage msg=" << one_line(e.what()) << "\n";
        return 2;
    } catch (const UsageError& e) {
        err << "error kind=usage msg=" << one_line(e.what()) << "\n";
        return 2;
    } catch (const Error& e) {
        err << "error kind=" << e.kind() << " msg=" << one_line(e.what()) << "\n";
        return 1;
    }

    CLI::App* verb = app.get_subcommands().front();
    auto given = [&](const char* name) { return verb->count(name) > 0; };
    if (verb->get_name() == "metrics" && !given("--split")) o.split = "all";

    try {
        const std::string name = verb->get_name();
        if (name == "generate") cmd_generate(o, out);
        else if (name == "simulate") cmd_simulate(o, out, given);
        else if (name == "fit") cmd_fit(o, out);
        else if (name == "analyze") cmd_analyze(o, out);
        else if (name == "prune") cmd_prune(o, out);
        else if (name == "extract") cmd_extract(o, out);
        else if (name == "identify") cmd_identify(o, out);
        else if (name == "predict") cmd_predict(o, out);
        else if (name == "metrics") cmd_metrics(o, out);
        else if (name == "dpd-train") cmd_dpd_train(o, out);
        else if (name == "dpd-apply") cmd_dpd_apply(o, out);
        else if (name == "sweep") cmd_sweep(o, out);
    } catch (const UsageError& e) {
        err << "error kind=usage msg=" << one_line(e.what()) << "\n";
        return 2;
    } catch (const Error& e) {
        err << "error kind=" << e.kind() << " msg=" << one_line(e.what()) << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << "error kind=internal msg=" << one_line(e.what()) << "\n";
        return 1;
    }
    return 0;
}

}  // namespace kernelpa::cli
