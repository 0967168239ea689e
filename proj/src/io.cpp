#include "ncsoliton/io.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <system_error>
#include <unistd.h>

#include "ncsoliton/error.hpp"

namespace ncsoliton::io {

json number(double v) {
    if (std::isfinite(v)) return v;
    if (std::isnan(v)) return "nan";
    return v > 0 ? "inf" : "-inf";
}

double to_double(const json& j) {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s == "inf") return std::numeric_limits<double>::infinity();
        if (s == "-inf") return -std::numeric_limits<double>::infinity();
        if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    }
    throw DomainError("expected a number, got " + j.dump());
}

namespace {

json numbers(const std::vector<double>& v) {
    json a = json::array();
    for (double x : v) a.push_back(number(x));
    return a;
}

std::vector<double> doubles(const json& a) {
    std::vector<double> out;
    out.reserve(a.size());
    for (const auto& x : a) out.push_back(to_double(x));
    return out;
}

const json& field(const json& j, const char* key) {
    if (!j.contains(key)) throw DomainError(std::string("construct file lacks field '") + key + "'");
    return j.at(key);
}

}  // namespace

json to_json(const Thresholds& t) {
    return json{{"p", t.p},           {"a0", number(t.a0)}, {"a1", number(t.a1)},
                {"a2", number(t.a2)}, {"a3", number(t.a3)}, {"mu_star", number(t.mu_star)},
                {"notes",
                 {{"a1_rule", "sufficient condition s_-(a) < b_-(a); may overestimate the sharp a1"},
                  {"mu_star_rule", "numerical upper bound on the existence threshold"}}}};
}

Thresholds thresholds_from_json(const json& j) {
    Thresholds t;
    t.p = j.at("p").get<int>();
    t.a0 = to_double(j.at("a0"));
    t.a1 = to_double(j.at("a1"));
    t.a2 = to_double(j.at("a2"));
    t.a3 = to_double(j.at("a3"));
    t.mu_star = to_double(j.at("mu_star"));
    return t;
}

json to_json(const SolitonResult& r) {
    const auto& d = r.diagnostics;
    json params{{"mu", number(r.params.a)},
                {"p", r.params.p},
                {"iter_tol", number(r.params.iter_tol)},
                {"root_tol", number(r.params.root_tol)},
                {"max_iters", r.params.max_iters},
                {"xmax", r.alpha.truncation()},
                {"xmax_mode", r.params.truncation.fixed ? "fixed" : "auto"}};
    json diag{{"iterations", d.iterations},
              {"strictly_increasing", d.strictly_increasing},
              {"majorant_respected", d.majorant_respected},
              {"min_increment", number(d.min_increment)},
              {"l1_norms", numbers(d.l1_norms)},
              {"majorant", numbers(d.majorant)},
              {"step_l1", numbers(d.step_l1)},
              {"step_sup", numbers(d.step_sup)}};
    return json{{"format", kConstructFormat},
                {"params", params},
                {"thresholds", to_json(r.thresholds)},
                {"b_star", number(r.b_star)},
                {"q_at_root", number(r.q_at_root)},
                {"s_star", number(r.s_star)},
                {"residual_sup", number(r.residual_sup)},
                {"iterations_used", r.iterations_used},
                {"tail_l1", number(r.alpha.tail_l1)},
                {"diagnostics", diag},
                {"alpha", numbers(r.alpha.values)}};
}

SolitonResult soliton_from_json(const json& j) {
    if (!j.contains("format") || j.at("format") != kConstructFormat) {
        throw DomainError(std::string("not a construct file (expected format '") + kConstructFormat + "')");
    }
    SolitonResult r;
    const auto& params = field(j, "params");
    r.params.a = to_double(params.at("mu"));
    r.params.p = params.at("p").get<int>();
    r.params.iter_tol = to_double(params.at("iter_tol"));
    r.params.root_tol = to_double(params.at("root_tol"));
    r.params.max_iters = params.at("max_iters").get<int>();
    if (params.value("xmax_mode", "auto") == "fixed") r.params.truncation.fixed = params.at("xmax").get<std::size_t>();
    r.thresholds = thresholds_from_json(field(j, "thresholds"));
    r.b_star = to_double(field(j, "b_star"));
    r.q_at_root = to_double(field(j, "q_at_root"));
    r.s_star = to_double(field(j, "s_star"));
    r.residual_sup = to_double(field(j, "residual_sup"));
    r.iterations_used = field(j, "iterations_used").get<int>();
    r.alpha = LatticeVector(doubles(field(j, "alpha")), to_double(field(j, "tail_l1")));
    if (r.alpha.size() < 2) throw DomainError("construct file holds fewer than two sites");
    if (j.contains("diagnostics")) {
        const auto& d = j.at("diagnostics");
        r.diagnostics.iterations = d.at("iterations").get<int>();
        r.diagnostics.strictly_increasing = d.at("strictly_increasing").get<bool>();
        r.diagnostics.majorant_respected = d.at("majorant_respected").get<bool>();
        r.diagnostics.min_increment = to_double(d.at("min_increment"));
        r.diagnostics.l1_norms = doubles(d.at("l1_norms"));
        r.diagnostics.majorant = doubles(d.at("majorant"));
        r.diagnostics.step_l1 = doubles(d.at("step_l1"));
        r.diagnostics.step_sup = doubles(d.at("step_sup"));
    }
    r.params.validate();
    return r;
}

json to_json(const VerificationReport& r) {
    json checks = json::array();
    for (const auto& c : r.checks) {
        checks.push_back(json{{"name", c.name},
                              {"claim", c.claim},
                              {"pass", c.pass},
                              {"measured", number(c.measured)},
                              {"bound", number(c.bound)},
                              {"tolerance", number(c.tolerance)}});
    }
    json out{{"format", kReportFormat},
             {"params", json{{"mu", number(r.mu)},
                             {"p", r.p},
                             {"xmax", r.truncation},
                             {"iter_tol", number(r.iter_tol)},
                             {"root_tol", number(r.root_tol)}}},
             {"passed", r.passed()},
             {"checks", checks},
             {"decay_fit", nullptr}};
    if (r.decay) {
        const auto& d = *r.decay;
        out["decay_fit"] = json{{"c0_hat", number(d.fit.c0_hat)},
                                {"c1_hat", number(d.fit.c1_hat)},
                                {"fit_residual", number(d.fit.fit_residual)},
                                {"window", json::array({d.fit.window_lo, d.fit.window_hi})},
                                {"x_star", d.x_star},
                                {"q_bar", number(d.q_bar)},
                                {"envelope_constant", number(d.envelope_constant)},
                                {"envelope_constant_literal", number(d.envelope_constant_literal)},
                                {"envelope_ratio", number(d.envelope_ratio)},
                                {"envelope_ratio_literal", number(d.envelope_ratio_literal)},
                                {"c1_lower", number(d.c1_lower)},
                                {"c1_upper", number(d.c1_upper)},
                                {"c1_closed_lower", number(d.c1_closed_lower)},
                                {"c1_closed_upper", number(d.c1_closed_upper)},
                                {"eps", number(d.eps)}};
    }
    return out;
}

json to_json(const std::vector<dnls::Snapshot>& snapshots) {
    json list = json::array();
    for (const auto& s : snapshots) {
        std::vector<double> re;
        std::vector<double> im;
        for (const auto& z : s.w.values) {
            re.push_back(z.real());
            im.push_back(z.imag());
        }
        list.push_back(json{{"t", number(s.t)}, {"re", numbers(re)}, {"im", numbers(im)}});
    }
    return json{{"format", kSnapshotFormat}, {"snapshots", list}};
}

void write_atomic(const std::filesystem::path& path, const std::string& contents) {
    namespace fs = std::filesystem;
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    fs::path tmp = path;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot open " + tmp.string() + " for writing");
        out << contents;
        out.flush();
        if (!out) throw Error("failed writing " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp);
        throw Error("cannot move " + tmp.string() + " to " + path.string() + ": " + ec.message());
    }
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DomainError("cannot read " + path.string());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

json read_json(const std::filesystem::path& path) {
    try {
        return json::parse(read_file(path));
    } catch (const json::parse_error& e) {
        throw DomainError(path.string() + ": invalid JSON (" + e.what() + ")");
    }
}

void write_json(const std::filesystem::path& path, const json& j) { write_atomic(path, j.dump(2) + "\n"); }

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

void CsvTable::add_row(const std::vector<double>& row) {
    if (row.size() != header_.size()) throw DomainError("csv row width does not match the header");
    rows_.push_back(row);
}

std::string CsvTable::str() const {
    std::ostringstream os;
    os.precision(17);
    for (std::size_t i = 0; i < header_.size(); ++i) os << (i ? "," : "") << header_[i];
    os << '\n';
    for (const auto& row : rows_) {
        for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
        os << '\n';
    }
    return os.str();
}

}  // namespace ncsoliton::io
