// Command line front end: group invariants, field enumerations, asymptotic
// fits and the end-to-end tower report.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "malle/abelian.hpp"
#include "malle/classgroup.hpp"
#include "malle/cubicforms.hpp"
#include "malle/eisenstein.hpp"
#include "malle/fit.hpp"
#include "malle/invariants.hpp"
#include "malle/kummer.hpp"
#include "malle/report.hpp"
#include "malle/series.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace malle;

namespace {

constexpr const char* kVersion = "0.2.0";

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitBudget = 3;
constexpr int kExitInternal = 4;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---- spec parsers ----

std::vector<std::string> split_top_level(const std::string& s, char sep) {
    std::vector<std::string> out;
    int depth = 0;
    std::string cur;
    for (char c : s) {
        if (c == '(') ++depth;
        if (c == ')') --depth;
        if (c == sep && depth == 0) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

PermGroup parse_named_group(const std::string& name) {
    if (name == "S3") return symmetric3();
    if (name.size() >= 2 && name[0] == 'C') {
        unsigned long n = std::stoul(name.substr(1));
        if (n < 2 || n > 10000) throw UsageError("unsupported cyclic order: " + name);
        return cyclic_group(static_cast<std::uint32_t>(n));
    }
    throw UsageError("unknown named group: " + name + " (expected C<n> or S3)");
}

PermGroup parse_group_spec(const std::string& spec) {
    auto inner = [&](const std::string& prefix) {
        if (spec.back() != ')') throw UsageError("bad group spec: " + spec);
        return spec.substr(prefix.size(), spec.size() - prefix.size() - 1);
    };
    if (spec.rfind("wreath(", 0) == 0) {
        auto args = split_top_level(inner("wreath("), ',');
        if (args.size() != 2 || args[0].empty() || args[1].empty() || args[0][0] != 'C' || args[1][0] != 'C')
            throw UsageError("wreath expects (C<l>,C<m>)");
        return wreath_cyclic(static_cast<std::uint32_t>(std::stoul(args[0].substr(1))),
                             static_cast<std::uint32_t>(std::stoul(args[1].substr(1))));
    }
    if (spec.rfind("regular(", 0) == 0) {
        std::string name = inner("regular(");
        PermGroup G = parse_named_group(name);
        if (G.degree == G.order) return G;  // cyclic groups are already regular
        return regular_rep(G);
    }
    if (spec.rfind("product(", 0) == 0) {
        auto args = split_top_level(inner("product("), ',');
        if (args.size() != 2) throw UsageError("product expects two group specs");
        return product_action(parse_group_spec(args[0]), parse_group_spec(args[1]));
    }
    if (spec.rfind("perms:", 0) == 0) {
        std::string body = spec.substr(6);
        auto parts = split_top_level(body, ';');
        std::uint32_t degree = 0;
        for (const auto& p : parts) degree = std::max(degree, infer_degree(p));
        if (degree == 0) throw UsageError("perms: no points found");
        std::vector<Permutation> gens;
        for (const auto& p : parts) gens.push_back(parse_cycles(p, degree));
        return close_group(degree, gens);
    }
    throw UsageError("unknown group spec: " + spec);
}

CyclotomicSpec parse_field_spec(const std::string& spec, u64 e) {
    if (spec == "Q") return field_rationals(e);
    if (spec.rfind("Qzeta:", 0) == 0) return field_cyclotomic(std::stoull(spec.substr(6)), e);
    if (spec.rfind("Qsqrt:", 0) == 0) return field_quadratic(std::stoll(spec.substr(6)), e);
    if (spec.rfind("raw:", 0) == 0) {
        auto parts = split_top_level(spec.substr(4), ':');
        if (parts.size() != 2) throw UsageError("raw field spec: raw:<e>:<t1,t2,...>");
        u64 re = std::stoull(parts[0]);
        if (re != e)
            throw UsageError("raw field spec modulus " + parts[0] + " != group exponent " +
                             std::to_string(e));
        std::vector<u64> gens;
        for (const auto& g : split_top_level(parts[1], ',')) gens.push_back(std::stoull(g));
        return field_raw(e, gens);
    }
    throw UsageError("unknown field spec: " + spec);
}

u64 require_bound(const std::string& s) {
    auto b = parse_bound(s);
    if (!b || *b == 0) throw UsageError("bad bound: " + s);
    return *b;
}

// ---- JSON helpers ----

json fit_to_json(const FitReport& r) {
    json j;
    j["power"] = {{"a", r.power.a}, {"c", r.power.c}, {"rss", r.power.rss}};
    j["powerlog"] = {{"a", r.powerlog.a},
                     {"beta", r.powerlog.beta},
                     {"c", r.powerlog.c},
                     {"rss", r.powerlog.rss}};
    j["preferred_model"] = model_name(r.preferred_model);
    j["a_hat"] = r.a_hat;
    j["beta_hat"] = r.beta_hat;
    j["c_hat"] = r.c_hat;
    j["doubling_ratios"] = r.doubling_ratios;
    return j;
}

json invariants_to_json(const MalleInvariants& inv, const std::string& group,
                        const std::string& field) {
    json j;
    j["group"] = group;
    j["field"] = field;
    j["ind"] = inv.ind_G;
    j["a"] = inv.a.str();
    j["b"] = inv.b;
    json orbits = json::array();
    for (const auto& orb : inv.minimal_k_class_orbits) {
        json o = json::array();
        for (const auto& cls : orb) o.push_back(cls.representative.cycle_str());
        orbits.push_back(o);
    }
    j["minimal_class_orbits"] = orbits;
    j["prediction"] = {{"a", inv.a.str()},
                       {"log_exponent", inv.prediction_log_exponent},
                       {"formula", prediction_formula(inv)}};
    return j;
}

json series_report_to_json(const SeriesReport& r) {
    json j;
    j["label"] = r.series.label;
    j["fit"] = fit_to_json(r.fit);
    j["sqrt_log_slope"] = {{"slope", r.sqrt_log_slope.slope}, {"r2", r.sqrt_log_slope.r2}};
    return j;
}

void print_fit_table(std::ostream& os, const CountSeries& s, const FitReport& r) {
    os << "series: " << s.label << "\n";
    char buf[160];
    std::snprintf(buf, sizeof buf, "  %-14s a=%-10.6f c=%-12.6g rss=%-10.4g\n", "power:",
                  r.power.a, r.power.c, r.power.rss);
    os << buf;
    std::snprintf(buf, sizeof buf, "  %-14s a=%-10.6f beta=%-8.4f c=%-12.6g rss=%-10.4g\n",
                  "power*log^b:", r.powerlog.a, r.powerlog.beta, r.powerlog.c, r.powerlog.rss);
    os << buf;
    os << "  preferred:    " << model_name(r.preferred_model) << "\n";
}

// ---- enumeration output files + cache ----

struct OutputSink {
    fs::path outdir;
    fs::path cachedir;
    bool use_cache = true;
    std::string key;

    fs::path cache_entry() const { return cachedir / key; }

    bool restore_from_cache() const {
        if (!use_cache || !fs::exists(cache_entry())) return false;
        fs::create_directories(outdir);
        for (const auto& ent : fs::directory_iterator(cache_entry()))
            fs::copy_file(ent.path(), outdir / ent.path().filename(),
                          fs::copy_options::overwrite_existing);
        return true;
    }

    void store_to_cache(const std::vector<fs::path>& files) const {
        if (!use_cache) return;
        fs::create_directories(cache_entry());
        for (const auto& f : files)
            fs::copy_file(f, cache_entry() / f.filename(), fs::copy_options::overwrite_existing);
    }
};

void write_text_file(const fs::path& p, const std::string& text) {
    std::ofstream f(p, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + p.string());
    f << text;
}

std::vector<fs::path> enumerate_family(const std::string& family, u64 bound, unsigned jobs,
                                       DiscSign sign, i64 d2_filter, const fs::path& outdir) {
    fs::create_directories(outdir);
    std::vector<fs::path> files;
    auto counts_path = [&](const std::string& stem) { return outdir / (stem + "_counts.csv"); };
    auto fields_path = [&](const std::string& stem) { return outdir / (stem + "_fields.csv"); };
    auto cps = pow10_checkpoints(bound);
    if (family == "quadratic") {
        auto ds = fundamental_discs(bound);
        std::ostringstream f;
        f << "d\n";
        for (i64 d : ds) f << d << "\n";
        write_text_file(fields_path("quadratic"), f.str());
        write_counts_csv(counts_path("quadratic").string(), quadratic_series(bound, cps));
        files = {fields_path("quadratic"), counts_path("quadratic")};
    } else if (family == "c3q") {
        auto conductors = cyclic_cubic_conductors(isqrt_u64(bound));
        std::ostringstream f;
        f << "f,fields,disc\n";
        for (const auto& c : conductors) f << c.f << "," << c.field_count() << "," << c.f * c.f << "\n";
        write_text_file(fields_path("c3q"), f.str());
        write_counts_csv(counts_path("c3q").string(), cyclic_cubic_series(bound, cps));
        files = {fields_path("c3q"), counts_path("c3q")};
    } else if (family == "c6") {
        auto pairs = c6_fields(bound, d2_filter);
        std::ostringstream f;
        f << "d2,f3,disc,fields\n";
        for (const auto& p : pairs)
            f << p.d2 << "," << p.f3 << "," << p.disc << "," << p.multiplicity << "\n";
        write_text_file(fields_path("c6"), f.str());
        write_counts_csv(counts_path("c6").string(), c6_series(bound, cps, d2_filter));
        files = {fields_path("c6"), counts_path("c6")};
    } else if (family == "c3-eisenstein") {
        KummerEnumeration E = kummer_enumerate(bound, jobs);
        std::ostringstream f;
        write_tower_csv(f, E);
        write_text_file(fields_path("c3_eisenstein"), f.str());
        write_counts_csv(counts_path("c3_eisenstein").string(), kummer_count_series(E, cps));
        write_counts_csv((outdir / "c3_eisenstein_lower_counts.csv").string(),
                         kummer_lower_bound_series(E, pow10_checkpoints(27 * bound)));
        files = {fields_path("c3_eisenstein"), counts_path("c3_eisenstein"),
                 outdir / "c3_eisenstein_lower_counts.csv"};
    } else if (family == "cubic") {
        auto fields = enumerate_fields(static_cast<i64>(bound), sign, jobs);
        std::ostringstream f;
        f << "a,b,c,d,disc\n";
        for (const auto& cf : fields)
            f << cf.form.a << "," << cf.form.b << "," << cf.form.c << "," << cf.form.d << ","
              << cf.disc << "\n";
        write_text_file(fields_path("cubic"), f.str());
        write_counts_csv(counts_path("cubic").string(), cubic_series(fields, cps));
        files = {fields_path("cubic"), counts_path("cubic")};
    } else if (family == "cl3") {
        auto rows = cl3_table(bound, jobs);
        std::ostringstream f;
        f << "d,h,cl3\n";
        for (const auto& r : rows) f << r.d << "," << r.h << "," << r.cl3 << "\n";
        write_text_file(fields_path("cl3"), f.str());
        auto avg = cl3_average_series(rows, cps);
        std::ostringstream g;
        g << "x,mean_cl3\n";
        char buf[64];
        for (const auto& p : avg) {
            std::snprintf(buf, sizeof buf, "%llu,%.10f\n", (unsigned long long)p.x, p.mean_cl3);
            g << buf;
        }
        write_text_file(outdir / "cl3_averages.csv", g.str());
        files = {fields_path("cl3"), outdir / "cl3_averages.csv"};
    } else {
        throw UsageError("unknown family: " + family);
    }
    return files;
}

int run(int argc, char** argv) {
    CLI::App app{"invariants and exact field counts for Malle-type asymptotics"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    // invariants
    auto* inv_cmd = app.add_subcommand("invariants", "a(G), b(k,G) and the predicted asymptotic");
    std::string group_spec, field_spec_str = "Q";
    inv_cmd->add_option("--group", group_spec, "wreath(Cl,Cm) | regular(C<n>|S3) | product(g1,g2) | perms:<cycles;...>")
        ->required();
    inv_cmd->add_option("--field", field_spec_str, "Q | Qzeta:<d> | Qsqrt:<D> | raw:<e>:<t1,...>");

    // enumerate
    auto* enum_cmd = app.add_subcommand("enumerate", "exact field enumerations to CSV");
    std::string family, bound_str = "1e6", sign_str = "both", outdir_str = "out";
    unsigned jobs = 1;
    bool no_cache = false;
    i64 d2_filter = 0;
    enum_cmd->add_option("family", family, "quadratic | c3q | c6 | c3-eisenstein | cubic | cl3")
        ->required();
    enum_cmd->add_option("--bound", bound_str, "bound (scientific notation accepted)");
    enum_cmd->add_option("--sign", sign_str, "cubic only: pos | neg | both");
    enum_cmd->add_option("--d2", d2_filter, "c6 only: fix the quadratic subfield discriminant");
    enum_cmd->add_option("--jobs", jobs, "worker threads (output is identical for any value)");
    enum_cmd->add_option("--out", outdir_str, "output directory");
    enum_cmd->add_flag("--no-cache", no_cache, "bypass the enumeration cache");

    // fit
    auto* fit_cmd = app.add_subcommand("fit", "fit c*x^a*log(x)^beta to a counts CSV");
    std::string fit_input;
    std::string fit_min_x_str = "0";
    fit_cmd->add_option("--input", fit_input, "counts CSV (x,count)")->required();
    fit_cmd->add_option("--min-x", fit_min_x_str, "drop checkpoints below this");

    // report
    auto* rep_cmd = app.add_subcommand("report", "end-to-end reports");
    auto* cex_cmd = rep_cmd->add_subcommand("counterexample",
                                            "prediction vs exact counts for C3 wr C2 over Q");
    std::string rep_bound_str = "1e10", rep_out_str = "out";
    unsigned rep_jobs = 1;
    bool pure_wreath = false, rep_no_cache = false;
    cex_cmd->add_option("--bound", rep_bound_str, "absolute discriminant bound (>= 1e6)");
    cex_cmd->add_flag("--pure-wreath", pure_wreath, "also fit the series with C6/S3 towers removed");
    cex_cmd->add_option("--jobs", rep_jobs, "worker threads");
    cex_cmd->add_option("--out", rep_out_str, "output directory");
    cex_cmd->add_flag("--no-cache", rep_no_cache, "bypass the enumeration cache");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help/--version
        app.exit(e);
        return kExitUsage;
    }

    if (inv_cmd->parsed()) {
        PermGroup G = parse_group_spec(group_spec);
        CyclotomicSpec k = parse_field_spec(field_spec_str, G.exponent());
        MalleInvariants inv = malle_invariants(k, G);
        json j = invariants_to_json(inv, group_spec, field_spec_str);
        j["degree"] = G.degree;
        j["order"] = G.order;
        j["exponent"] = G.exponent();
        std::cout << j.dump(2) << "\n";
        return kExitOk;
    }

    if (enum_cmd->parsed()) {
        u64 bound = require_bound(bound_str);
        DiscSign sign = sign_str == "pos"   ? DiscSign::POSITIVE
                        : sign_str == "neg" ? DiscSign::NEGATIVE
                        : sign_str == "both" ? DiscSign::BOTH
                                             : throw UsageError("bad --sign: " + sign_str);
        OutputSink sink;
        sink.outdir = outdir_str;
        sink.cachedir = fs::path(outdir_str) / ".cache";
        sink.use_cache = !no_cache;
        std::ostringstream key;
        key << family << "-" << bound << "-" << sign_str << "-d2_" << d2_filter << "-v" << kVersion;
        sink.key = key.str();
        if (sink.restore_from_cache()) {
            std::cout << "restored from cache: " << sink.cache_entry().string() << "\n";
            return kExitOk;
        }
        auto files = enumerate_family(family, bound, jobs, sign, d2_filter, sink.outdir);
        json meta{{"family", family}, {"bound", bound}, {"sign", sign_str},
                  {"d2", d2_filter}, {"version", kVersion}};
        write_text_file(sink.outdir / (family + "_meta.json"), meta.dump(2) + "\n");
        sink.store_to_cache(files);
        for (const auto& f : files) std::cout << "wrote " << f.string() << "\n";
        return kExitOk;
    }

    if (fit_cmd->parsed()) {
        CountSeries s = read_counts_csv_file(fit_input);
        u64 min_x = require_bound(fit_min_x_str == "0" ? "1" : fit_min_x_str);
        FitReport r = compare_models(s, fit_min_x_str == "0" ? 0 : min_x);
        print_fit_table(std::cerr, s, r);
        std::cout << fit_to_json(r).dump(2) << "\n";
        return kExitOk;
    }

    if (cex_cmd->parsed()) {
        ReportOptions opt;
        opt.bound = require_bound(rep_bound_str);
        opt.jobs = rep_jobs;
        opt.pure_wreath = pure_wreath;
        CounterexampleReport R = report_counterexample(opt);
        fs::path outdir(rep_out_str);
        fs::create_directories(outdir);
        write_counts_csv((outdir / "kummer_lower_counts.csv").string(), R.kummer_lower.series);
        write_counts_csv((outdir / "c3q_counts.csv").string(), R.cyclic_cubic_q.series);
        write_counts_csv((outdir / "c6_counts.csv").string(), R.c6);
        write_counts_csv((outdir / "s36_upper_counts.csv").string(), R.s36_upper);
        if (R.pure_wreath)
            write_counts_csv((outdir / "pure_wreath_counts.csv").string(), R.pure_wreath->series);
        json j;
        j["bound"] = R.bound;
        j["prediction_Q_C3wrC2"] = invariants_to_json(R.wreath_over_Q, "wreath(C3,C2)", "Q");
        j["prediction_Qzeta3_C3wrC2"] =
            invariants_to_json(R.wreath_over_Qzeta3, "wreath(C3,C2)", "Qzeta:3");
        j["prediction_Qzeta3_C3"] = invariants_to_json(R.c3_over_Qzeta3, "regular(C3)", "Qzeta:3");
        j["kummer_lower"] = series_report_to_json(R.kummer_lower);
        j["cyclic_cubic_q"] = series_report_to_json(R.cyclic_cubic_q);
        if (R.pure_wreath) j["pure_wreath"] = series_report_to_json(*R.pure_wreath);
        j["contradiction"] = R.contradiction;
        j["narrative"] = R.narrative;
        write_text_file(outdir / "counterexample_report.json", j.dump(2) + "\n");
        print_fit_table(std::cout, R.kummer_lower.series, R.kummer_lower.fit);
        print_fit_table(std::cout, R.cyclic_cubic_q.series, R.cyclic_cubic_q.fit);
        std::cout << R.narrative << "\n";
        std::cout << "report written to " << (outdir / "counterexample_report.json").string() << "\n";
        return kExitOk;
    }

    return kExitUsage;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const CLI::Error& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const internal_consistency_error& e) {
        std::cerr << "internal consistency failure: " << e.what() << "\n";
        return kExitInternal;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::runtime_error& e) {
        std::string msg = e.what();
        if (msg.find("budget") != std::string::npos || msg.find("cap exceeded") != std::string::npos) {
            std::cerr << "budget exceeded: " << msg << "\n";
            return kExitBudget;
        }
        std::cerr << "error: " << msg << "\n";
        return kExitInternal;
    }
}
