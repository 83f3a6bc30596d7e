#include "kernelpa/model_io.hpp"

#include <algorithm>

#include "kernelpa/error.hpp"
#include "text_format.hpp"

namespace kernelpa {
namespace {

using detail::format_complex;
using detail::format_double;

constexpr std::string_view kNpHeader = "kernelpa-npmodel 1";
constexpr std::string_view kParHeader = "kernelpa-parametric 1";
constexpr std::string_view kDpdHeader = "kernelpa-dpd 1";

class LineReader {
public:
    explicit LineReader(std::string_view text) {
        std::size_t b = 0;
        while (b <= text.size()) {
            auto e = text.find('\n', b);
            if (e == std::string_view::npos) e = text.size();
            auto line = text.substr(b, e - b);
            if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
            lines_.push_back(line);
            b = e + 1;
        }
        while (!lines_.empty() && detail::trim(lines_.back()).empty()) lines_.pop_back();
    }

    std::string_view raw() {
        if (pos_ >= lines_.size()) throw FormatError("model file ends early");
        return lines_[pos_++];
    }

    // Whitespace tokens of the next line; the first must equal `key`.
    std::vector<std::string_view> record(std::string_view key) {
        const auto line = raw();
        auto tokens = detail::split_ws(line);
        if (tokens.empty() || tokens[0] != key)
            throw FormatError("line " + std::to_string(pos_) + ": expected '" + std::string(key) + "'");
        tokens.erase(tokens.begin());
        return tokens;
    }

    std::string_view single(std::string_view key) {
        const auto t = record(key);
        if (t.size() != 1) throw FormatError("line " + std::to_string(pos_) + ": '" + std::string(key) + "' takes one value");
        return t[0];
    }

    // Everything after "key " on the next line.
    std::string rest(std::string_view key) {
        const auto line = raw();
        if (line.substr(0, key.size()) != key || (line.size() > key.size() && line[key.size()] != ' '))
            throw FormatError("line " + std::to_string(pos_) + ": expected '" + std::string(key) + "'");
        return line.size() > key.size() ? std::string(line.substr(key.size() + 1)) : std::string();
    }

    void header(std::string_view expected) {
        if (detail::trim(raw()) != expected) throw FormatError("expected header '" + std::string(expected) + "'");
    }

    void end() {
        if (pos_ != lines_.size()) throw FormatError("trailing content after model at line " + std::to_string(pos_ + 1));
    }

    // Remaining lines joined back into text.
    std::string remainder() {
        std::string out;
        for (; pos_ < lines_.size(); ++pos_) {
            out += lines_[pos_];
            out += '\n';
        }
        return out;
    }

private:
    std::vector<std::string_view> lines_;
    std::size_t pos_ = 0;
};

std::size_t to_size(std::string_view s) {
    const auto v = detail::parse_int(s);
    if (v < 0) throw FormatError("expected a nonnegative integer, got '" + std::string(s) + "'");
    return static_cast<std::size_t>(v);
}

bool to_flag(std::string_view s) {
    if (s == "1") return true;
    if (s == "0") return false;
    throw FormatError("expected 0 or 1, got '" + std::string(s) + "'");
}

std::string one_line(std::string s) {
    std::replace_if(s.begin(), s.end(), [](char c) { return c == '\n' || c == '\r'; }, ' ');
    return s;
}

void write_table(std::string& out, const ProjectionTable& t) {
    out += "projection_columns " + std::to_string(t.size()) + "\n";
    for (std::size_t k = 0; k < t.size(); ++k) {
        out += "projection " + format_double(t.norms[k]) + " " + (t.degenerate[k] ? "1" : "0");
        for (const auto& c : t.projections[k]) out += " " + format_complex(c);
        out += "\n";
    }
}

ProjectionTable read_table(LineReader& in) {
    const auto n = to_size(in.single("projection_columns"));
    ProjectionTable t;
    for (std::size_t k = 0; k < n; ++k) {
        const auto tok = in.record("projection");
        if (tok.size() != k + 2) throw FormatError("projection row " + std::to_string(k) + " has the wrong length");
        t.norms.push_back(detail::parse_double(tok[0]));
        t.degenerate.push_back(to_flag(tok[1]));
        ComplexVector row;
        for (std::size_t l = 0; l < k; ++l) row.push_back(detail::parse_complex(tok[l + 2]));
        t.projections.push_back(std::move(row));
    }
    return t;
}

std::string extrapolation_name(Extrapolation e) { return e == Extrapolation::Clamp ? "clamp" : "gain-hold"; }

Extrapolation parse_extrapolation(std::string_view s) {
    if (s == "clamp") return Extrapolation::Clamp;
    if (s == "gain-hold") return Extrapolation::GainHold;
    throw FormatError("unknown extrapolation '" + std::string(s) + "'");
}

void write_np(std::string& out, const NonParametricModel& m) {
    out += std::string(kNpHeader) + "\n";
    out += "memory_depth " + std::to_string(m.options.memory_depth) + "\n";
    out += "max_dimension " + std::to_string(m.options.max_dimension) + "\n";
    out += "grid_points " + std::to_string(m.options.grid_points) + "\n";
    out += "aperture_fraction " + format_double(m.options.aperture_fraction) + "\n";
    out += std::string("refine ") + (m.options.refine ? "1" : "0") + "\n";
    out += "extrapolation " + extrapolation_name(m.options.extrapolation) + "\n";
    out += "training_samples " + std::to_string(m.training_samples) + "\n";
    out += "input_label " + one_line(m.input_label) + "\n";
    write_table(out, m.projections);
    out += "bases " + std::to_string(m.entries.size()) + "\n";
    for (const auto& e : m.entries) {
        out += "basis " + e.descriptor.subset_label() + " " + std::to_string(e.descriptor.carrier_lag) + " " +
               (e.active ? "1" : "0") + " " + (e.degenerate ? "1" : "0") + "\n";
        if (!e.estimate) {
            out += "estimate none\n";
            continue;
        }
        const auto& f = *e.estimate;
        out += "estimate " + std::to_string(f.size()) + " " + format_double(f.aperture) + " " +
               format_double(f.aperture_fraction) + " " + format_double(f.support_min) + " " +
               format_double(f.support_max) + "\n";
        for (std::size_t i = 0; i < f.size(); ++i)
            out += "point " + format_double(f.grid[i]) + " " + (f.defined[i] ? "1" : "0") + " " +
                   format_complex(f.values[i]) + " " + format_double(f.sample_mass[i]) + "\n";
    }
}

NonParametricModel read_np(LineReader& in) {
    in.header(kNpHeader);
    NonParametricModel m;
    m.options.memory_depth = static_cast<int>(detail::parse_int(in.single("memory_depth")));
    m.options.max_dimension = static_cast<int>(detail::parse_int(in.single("max_dimension")));
    m.options.grid_points = to_size(in.single("grid_points"));
    m.options.aperture_fraction = detail::parse_double(in.single("aperture_fraction"));
    m.options.refine = to_flag(in.single("refine"));
    m.options.extrapolation = parse_extrapolation(in.single("extrapolation"));
    m.training_samples = to_size(in.single("training_samples"));
    m.input_label = in.rest("input_label");
    m.projections = read_table(in);
    const auto n = to_size(in.single("bases"));
    for (std::size_t k = 0; k < n; ++k) {
        const auto tok = in.record("basis");
        if (tok.size() != 4) throw FormatError("basis line needs subset, carrier, active, degenerate");
        BasisEntry e;
        for (auto lag : detail::split(tok[0], ','))
            e.descriptor.subset.insert(e.descriptor.subset.begin(), static_cast<int>(detail::parse_int(lag)));
        e.descriptor.carrier_lag = static_cast<int>(detail::parse_int(tok[1]));
        e.active = to_flag(tok[2]);
        e.degenerate = to_flag(tok[3]);
        const auto est = in.record("estimate");
        if (est.size() == 1 && est[0] == "none") {
            m.entries.push_back(std::move(e));
            continue;
        }
        if (est.size() != 5) throw FormatError("estimate line needs 5 fields");
        KernelFunctionEstimate f;
        const auto t = to_size(est[0]);
        f.aperture = detail::parse_double(est[1]);
        f.aperture_fraction = detail::parse_double(est[2]);
        f.support_min = detail::parse_double(est[3]);
        f.support_max = detail::parse_double(est[4]);
        for (std::size_t i = 0; i < t; ++i) {
            const auto p = in.record("point");
            if (p.size() != 4) throw FormatError("point line needs 4 fields");
            f.grid.push_back(detail::parse_double(p[0]));
            f.defined.push_back(to_flag(p[1]) ? 1 : 0);
            f.values.push_back(detail::parse_complex(p[2]));
            f.sample_mass.push_back(detail::parse_double(p[3]));
        }
        e.estimate = std::move(f);
        m.entries.push_back(std::move(e));
    }
    try {
        for (const auto& e : m.entries) e.descriptor.validate(m.options.memory_depth);
        m.validate();
    } catch (const ParameterError& e) {
        throw FormatError(std::string("inconsistent model: ") + e.what());
    }
    return m;
}

void write_par(std::string& out, const ParametricModel& m) {
    out += std::string(kParHeader) + "\n";
    out += std::string("domain ") + (m.domain == Domain::Orthogonal ? "orthogonal" : "original") + "\n";
    out += "training_nmse_db " + (m.training_nmse_db ? format_double(*m.training_nmse_db) : std::string("none")) + "\n";
    out += "terms " + std::to_string(m.terms.size()) + "\n";
    for (std::size_t i = 0; i < m.terms.size(); ++i)
        out += "term " + std::to_string(m.terms[i].lag) + " " + std::to_string(m.terms[i].p) + " " +
               format_complex(m.coefficients[i]) + "\n";
    write_table(out, m.projections);
}

ParametricModel read_par(LineReader& in) {
    in.header(kParHeader);
    ParametricModel m;
    const auto dom = in.single("domain");
    if (dom == "orthogonal")
        m.domain = Domain::Orthogonal;
    else if (dom == "original")
        m.domain = Domain::Original;
    else
        throw FormatError("unknown domain '" + std::string(dom) + "'");
    const auto nm = in.single("training_nmse_db");
    if (nm != "none") m.training_nmse_db = detail::parse_double(nm);
    const auto n = to_size(in.single("terms"));
    for (std::size_t i = 0; i < n; ++i) {
        const auto tok = in.record("term");
        if (tok.size() != 3) throw FormatError("term line needs lag, p, coefficient");
        m.terms.push_back(ParametricTerm{static_cast<int>(detail::parse_int(tok[0])),
                                         static_cast<int>(detail::parse_int(tok[1]))});
        m.coefficients.push_back(detail::parse_complex(tok[2]));
    }
    m.projections = read_table(in);
    try {
        m.validate();
    } catch (const ParameterError& e) {
        throw FormatError(std::string("inconsistent model: ") + e.what());
    }
    return m;
}

}  // namespace

std::string to_text(const NonParametricModel& m) {
    std::string out;
    write_np(out, m);
    return out;
}

std::string to_text(const ParametricModel& m) {
    std::string out;
    write_par(out, m);
    return out;
}

std::string to_text(const DpdModel& d) {
    std::string out = std::string(kDpdHeader) + "\n";
    out += "gain " + format_complex(d.gain) + "\n";
    std::visit([&](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, NonParametricModel>)
            write_np(out, m);
        else
            write_par(out, m);
    }, d.inner);
    return out;
}

NonParametricModel npmodel_from_text(std::string_view text) {
    LineReader in(text);
    auto m = read_np(in);
    in.end();
    return m;
}

ParametricModel parametric_from_text(std::string_view text) {
    LineReader in(text);
    auto m = read_par(in);
    in.end();
    return m;
}

DpdModel dpd_from_text(std::string_view text) {
    LineReader in(text);
    in.header(kDpdHeader);
    const Complex gain = detail::parse_complex(in.single("gain"));
    const std::string inner = in.remainder();
    DpdModel d;
    d.gain = gain;
    if (detect_model_kind(inner) == ModelKind::NonParametric)
        d.inner = npmodel_from_text(inner);
    else if (detect_model_kind(inner) == ModelKind::Parametric)
        d.inner = parametric_from_text(inner);
    else
        throw FormatError("nested DPD model");
    try {
        d.validate();
    } catch (const ParameterError& e) {
        throw FormatError(std::string("inconsistent DPD model: ") + e.what());
    }
    return d;
}

ModelKind detect_model_kind(std::string_view text) {
    const auto nl = text.find('\n');
    const auto first = detail::trim(text.substr(0, nl));
    if (first == kNpHeader) return ModelKind::NonParametric;
    if (first == kParHeader) return ModelKind::Parametric;
    if (first == kDpdHeader) return ModelKind::Dpd;
    throw FormatError("unrecognized model header '" + std::string(first) + "'");
}

void save_model(const std::string& path, const NonParametricModel& m) { detail::write_text_file(path, to_text(m)); }
void save_model(const std::string& path, const ParametricModel& m) { detail::write_text_file(path, to_text(m)); }
void save_model(const std::string& path, const DpdModel& d) { detail::write_text_file(path, to_text(d)); }

NonParametricModel load_npmodel(const std::string& path) { return npmodel_from_text(detail::read_text_file(path)); }
ParametricModel load_parametric(const std::string& path) { return parametric_from_text(detail::read_text_file(path)); }
DpdModel load_dpd(const std::string& path) { return dpd_from_text(detail::read_text_file(path)); }

}  // namespace kernelpa
