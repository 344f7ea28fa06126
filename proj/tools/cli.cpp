#include "cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <fstream>
#include <ostream>
#include <sstream>

#include "mqf/discrepancy.hpp"
#include "mqf/jack.hpp"
#include "mqf/json_io.hpp"
#include "mqf/quadform.hpp"
#include "mqf/verify.hpp"

namespace mqf {

namespace {

struct Config {
    int beta = 1;
    int max_degree = 40;
    double rel_tol = 1e-8;
    double abs_tol = 1e-12;
    std::uint64_t seed = 42;
    std::string convention = "rank-r";
    bool printed_signs = false;
    std::string cf_scale = "printed";
    bool generic = false;
    std::string out;
    std::string format = "json";
    int workers = 1;
    bool timing = false;

    std::string kappa;
    std::string eigs;
    int weight = -1;

    std::string model;
    std::string a;
    std::string point;
    std::string spectra;
    bool table = false;

    std::uint64_t count = 1;
    bool antithetic = false;

    std::string suite = "default";
    std::string config;
    std::string input;
};

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::vector<double> parse_list(const std::string& s) {
    std::vector<double> v;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        try {
            std::size_t used = 0;
            v.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw UsageError("not a number: '" + item + "'");
        }
    }
    return v;
}

Partition parse_kappa(const std::string& s) {
    std::vector<int> parts;
    for (double v : parse_list(s)) {
        if (v != static_cast<int>(v)) throw UsageError("partition parts must be integers");
        parts.push_back(static_cast<int>(v));
    }
    try {
        return Partition(parts);
    } catch (const DomainError& e) {
        throw UsageError(e.what());
    }
}

SeriesControl control(const Config& c) {
    SeriesControl s;
    s.max_degree = c.max_degree;
    s.rel_tol = c.rel_tol;
    s.abs_tol = c.abs_tol;
    s.workers = c.workers;
    return s;
}

SeriesOptions options(const Config& c) {
    SeriesOptions o;
    o.convention = parse_convention(c.convention);
    o.paper_printed_signs = c.printed_signs;
    o.cf_scale = c.cf_scale == "derived" ? ArgumentScale::Derived : ArgumentScale::Printed;
    o.generic_path = c.generic;
    return o;
}

void emit(const Config& c, const json& j, const std::string& csv, std::ostream& out) {
    const std::string text = c.format == "csv" ? csv : dump_json(j) + "\n";
    if (c.out.empty()) {
        out << text;
        return;
    }
    std::ofstream f(c.out, std::ios::binary);
    if (!f) throw UsageError("cannot write '" + c.out + "'");
    f << text;
}

std::string csv_complex(std::complex<double> z) { return format_double(z.real()) + "," + format_double(z.imag()); }

int cmd_jack(const Config& c, std::ostream& out) {
    const AlgebraKind beta(c.beta);
    const std::vector<double> eigs = parse_list(c.eigs);
    std::vector<Partition> kappas;
    if (c.weight >= 0) {
        kappas = enumerate_partitions(c.weight, static_cast<int>(eigs.size()));
    } else {
        kappas.push_back(parse_kappa(c.kappa));
    }
    json values = json::array();
    std::string csv = "kappa,value\n";
    for (const auto& k : kappas) {
        const double v = jack_c<double>(k, std::span<const double>(eigs), beta);
        values.push_back({{"kappa", k.parts()}, {"value", v}});
        csv += "\"" + k.str() + "\"," + format_double(v) + "\n";
        if (c.weight >= 0)
            out << k.str() << " " << format_double(v) << "\n";
        else if (!c.out.empty() || c.format != "csv")
            out << format_double(v) << "\n";
    }
    if (!c.out.empty()) emit(c, {{"beta", c.beta}, {"eigs", eigs}, {"values", values}}, csv, out);
    return kExitOk;
}

struct Inputs {
    std::optional<QuadFormModel> model;
    std::optional<QuadFormSpectra> spectra;
    std::vector<double> point_eigs; // spectra mode
    double det_w = 1.0;
    std::optional<HermitianMatrix> point;
};

Inputs load_inputs(const Config& c, bool explicit_beta, bool density) {
    Inputs in;
    if (!c.spectra.empty()) {
        const json j = read_json_file(c.spectra);
        QuadFormSpectra sp;
        try {
            sp.beta = AlgebraKind(j.value("beta", c.beta));
            sp.n = j.at("n").get<int>();
            sp.m = j.at("m").get<int>();
            sp.r = j.at("r").get<int>();
            sp.family = j.contains("family") ? family_from_json(j.at("family")) : GeneratorFamily::normal();
            sp.det_sigma = j.value("det_sigma", 1.0);
            sp.det_theta = j.value("det_theta", 1.0);
            sp.det_lambda = j.value("det_lambda", 1.0);
            sp.theta_inv_a_plus = j.value("theta_inv_a_plus", std::vector<double>{});
            sp.theta_a = j.value("theta_a", std::vector<double>{});
            in.point_eigs = j.at(density ? "w_eigs" : "s_eigs").get<std::vector<double>>();
            in.det_w = j.value("det_w", 1.0);
        } catch (const json::exception& e) {
            throw FormatError(std::string("spectra file: ") + e.what());
        }
        if (explicit_beta && sp.beta.beta() != c.beta) throw UsageError("--beta disagrees with the spectra file");
        in.spectra = sp;
        return in;
    }
    if (c.model.empty()) throw UsageError("--model (or --spectra) is required");
    if (c.point.empty()) throw UsageError("--point is required");
    json mj = read_json_file(c.model);
    if (!c.a.empty()) mj["a"] = read_json_file(c.a);
    if (!mj.contains("a")) throw UsageError("the quadratic-form matrix A is missing (--a or an \"a\" entry in the model)");
    if (mj.contains("mu")) {
        const DAMatrix mu = matrix_from_json(mj.at("mu"));
        if (mu.frobenius_norm() != 0.0) throw UsageError("W = X* A X is only covered for a zero location mu");
    }
    const QuadFormModel model = quadform_model_from_json(mj);
    if (explicit_beta && model.beta.beta() != c.beta) throw UsageError("--beta disagrees with the model file");
    in.model = model;
    in.point = hermitian_from_json(read_json_file(c.point), model.beta);
    return in;
}

json series_json(const SeriesResult<std::complex<double>>& r, bool is_complex) {
    json j;
    j["value"] = is_complex ? complex_to_json(r.value) : json(r.value.real());
    j["degree_used"] = r.degree_used;
    j["tail_estimate"] = r.tail_estimate;
    j["converged"] = r.converged;
    json partial = json::array();
    for (const auto& p : r.partial_sums) partial.push_back(is_complex ? complex_to_json(p) : json(p.real()));
    j["partial_sums"] = partial;
    j["layer_norms"] = r.layer_norms;
    return j;
}

SeriesResult<std::complex<double>> to_complex(const SeriesResult<double>& r) {
    SeriesResult<std::complex<double>> c;
    c.value = r.value;
    c.degree_used = r.degree_used;
    c.tail_estimate = r.tail_estimate;
    c.converged = r.converged;
    for (double v : r.partial_sums) c.partial_sums.emplace_back(v);
    for (double v : r.layers) c.layers.emplace_back(v);
    c.layer_norms = r.layer_norms;
    return c;
}

int cmd_series(const Config& c, bool explicit_beta, bool density, std::ostream& out) {
    const Inputs in = load_inputs(c, explicit_beta, density);
    const SeriesControl ctrl = control(c);
    const SeriesOptions opts = options(c);
    auto evaluate = [&](const SeriesOptions& o) {
        if (density) {
            if (in.spectra) return to_complex(density_w_spectral(in.point_eigs, in.det_w, *in.spectra, ctrl, o));
            return to_complex(density_w(*in.point, *in.model, ctrl, o));
        }
        if (in.spectra) return cf_w_spectral(in.point_eigs, *in.spectra, ctrl, o);
        return cf_w(*in.point, *in.model, ctrl, o);
    };
    const auto r = evaluate(opts);
    json j = series_json(r, !density);
    j["convention"] = to_string(opts.convention);
    j["kind"] = density ? "density" : "cf";
    std::string csv = "field,re,im\n";
    csv += "value," + csv_complex(r.value) + "\n";
    csv += "degree_used," + std::to_string(r.degree_used) + ",0\n";
    csv += "tail_estimate," + format_double(r.tail_estimate) + ",0\n";
    csv += std::string("converged,") + (r.converged ? "1" : "0") + ",0\n";

    out << "value          " << (density ? format_double(r.value.real()) : format_double(r.value.real()) + " " + format_double(r.value.imag()) + "i") << "\n";
    out << "degree_used    " << r.degree_used << "\n";
    out << "tail_estimate  " << format_double(r.tail_estimate) << "\n";
    out << "converged      " << (r.converged ? "true" : "false") << "\n";
    out << "convention     " << to_string(opts.convention) << "\n";

    if (!density) {
        const Dims d = in.spectra ? Dims{in.spectra->m, in.spectra->n, in.spectra->beta} : in.model->dims();
        const GeneratorFamily f = in.spectra ? in.spectra->family : in.model->family;
        const double raw = cf_raw_printed_prefactor(f, d);
        j["raw_printed_prefactor"] = raw;
        j["argument_scale"] = to_string(opts.cf_scale);
        out << "raw_printed_prefactor " << format_double(raw) << " (normalised to 1)\n";
    }

    // Other conventions, shown when they give a different value.
    json alts = json::object();
    for (auto conv : {SplittingConvention::RankR, SplittingConvention::FullM, SplittingConvention::FullN}) {
        if (conv == opts.convention) continue;
        SeriesOptions o = opts;
        o.convention = conv;
        try {
            const auto a = evaluate(o);
            if (std::abs(a.value - r.value) <= kCoincidence * std::max(1.0, std::abs(r.value))) continue;
            alts[to_string(conv)] = density ? json(a.value.real()) : complex_to_json(a.value);
            out << "value (" << to_string(conv) << ")  "
                << (density ? format_double(a.value.real())
                            : format_double(a.value.real()) + " " + format_double(a.value.imag()) + "i")
                << "\n";
            csv += "value_" + to_string(conv) + "," + csv_complex(a.value) + "\n";
        } catch (const Error& e) {
            alts[to_string(conv)] = std::string("unavailable: ") + e.what();
        }
    }
    j["other_conventions"] = alts;

    if (c.table) {
        if (!in.model) throw UsageError("--table needs matrix inputs (--model/--point)");
        const auto rows = series_partial_table(*in.model, density ? SeriesKind::Density : SeriesKind::CharacteristicFunction,
                                               *in.point, ctrl, opts);
        json t = json::array();
        out << "degree layer partial term_norm\n";
        csv += "degree,layer_re,layer_im,partial_re,partial_im,term_norm\n";
        for (const auto& row : rows) {
            t.push_back({{"degree", row.degree},
                         {"layer", complex_to_json(row.layer)},
                         {"partial", complex_to_json(row.partial)},
                         {"term_norm", row.term_norm}});
            out << row.degree << " " << format_double(row.layer.real()) << " " << format_double(row.partial.real())
                << " " << format_double(row.term_norm) << "\n";
            csv += std::to_string(row.degree) + "," + csv_complex(row.layer) + "," + csv_complex(row.partial) + "," +
                   format_double(row.term_norm) + "\n";
        }
        j["table"] = t;
    }
    if (!c.out.empty()) emit(c, j, csv, out);
    return kExitOk;
}

int cmd_sample(const Config& c, bool explicit_beta, std::ostream& out) {
    if (c.model.empty()) throw UsageError("--model is required");
    const EllipticalModel model = model_from_json(read_json_file(c.model));
    if (explicit_beta && model.beta.beta() != c.beta) throw UsageError("--beta disagrees with the model file");
    const auto draws = sample_x(model, c.count, c.seed, c.antithetic);
    std::ostringstream lines;
    for (const auto& x : draws) lines << dump_json(matrix_to_json(x), -1) << "\n";
    if (c.out.empty()) {
        out << lines.str();
    } else {
        std::ofstream f(c.out, std::ios::binary);
        if (!f) throw UsageError("cannot write '" + c.out + "'");
        f << lines.str();
    }
    return kExitOk;
}

std::string suite_csv(const json& report) {
    std::string csv = "name,topic,verdict,estimate_re,estimate_im,standard_error,band,sample_count,seed\n";
    for (const auto& r : report.at("checks")) {
        csv += r.at("name").get<std::string>() + "," + r.value("topic", "") + ",\"" + r.at("verdict").get<std::string>() +
               "\"," + format_double(r.at("estimate").at("re").get<double>()) + "," +
               format_double(r.at("estimate").at("im").get<double>()) + "," +
               format_double(r.at("standard_error").get<double>()) + "," + format_double(r.at("band").get<double>()) +
               "," + std::to_string(r.at("sample_count").get<std::uint64_t>()) + "," +
               std::to_string(r.at("seed").get<std::uint64_t>()) + "\n";
    }
    return csv;
}

json load_suite(const Config& c) {
    if (!c.config.empty()) return read_json_file(c.config);
    if (c.suite == "default") return default_suite_config(c.seed);
    if (c.suite == "empty") return json::array();
    throw UsageError("unknown suite '" + c.suite + "' (expected default or empty, or use --config)");
}

int cmd_check(const Config& c, std::ostream& out) {
    int failures = 0;
    const json report = run_suite(load_suite(c), c.workers, c.timing, failures);
    if (c.out.empty()) {
        emit(c, report, suite_csv(report), out);
    } else {
        emit(c, report, suite_csv(report), out);
        for (const auto& r : report.at("checks"))
            out << r.at("name").get<std::string>() << " " << r.value("topic", "-") << " "
                << r.at("verdict").get<std::string>() << "\n";
        const auto& s = report.at("summary");
        out << "total " << s.at("total") << ", fail " << s.at("fail") << ", inconclusive " << s.at("inconclusive") << "\n";
    }
    return failures > 0 ? kExitCheckFailed : kExitOk;
}

int cmd_report(const Config& c, std::ostream& out) {
    json report;
    if (!c.input.empty()) {
        report = read_json_file(c.input);
    } else {
        int failures = 0;
        report = run_suite(default_suite_config(c.seed), c.workers, false, failures);
    }
    const auto rows = discrepancy_rows(report);
    out << render_discrepancy_text(rows);
    if (!c.out.empty()) emit(c, discrepancy_json(rows), render_discrepancy_csv(rows), out);
    return kExitOk;
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Density and characteristic-function series for matrix quadratic forms", "mqf"};
    app.require_subcommand(1);
    Config c;
    auto* beta_opt = app.add_option("--beta", c.beta, "algebra dimension")->check(CLI::IsMember({1, 2, 4, 8}));
    app.add_option("--max-degree", c.max_degree, "series truncation degree K")->check(CLI::NonNegativeNumber);
    app.add_option("--rel-tol", c.rel_tol, "relative stopping tolerance")->check(CLI::PositiveNumber);
    app.add_option("--abs-tol", c.abs_tol, "absolute stopping tolerance")->check(CLI::PositiveNumber);
    app.add_option("--seed", c.seed, "random seed");
    app.add_option("--convention", c.convention, "C_kappa(I_d) denominator")
        ->check(CLI::IsMember({"rank-r", "full-m", "full-n"}));
    app.add_flag("--paper-printed-signs", c.printed_signs, "Pearson VII density without the (-1)^k");
    app.add_option("--cf-scale", c.cf_scale, "CF argument multiplier: printed (i beta) or derived (i/beta)")
        ->check(CLI::IsMember({"printed", "derived"}));
    app.add_flag("--generic-path", c.generic, "evaluate through h^(k)(0) and theta(c)");
    app.add_option("--out", c.out, "write the machine-readable result here");
    app.add_option("--format", c.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    app.add_option("--workers", c.workers, "worker threads")->check(CLI::PositiveNumber);
    app.add_flag("--timing", c.timing, "include wall times in check reports");

    auto* jack = app.add_subcommand("jack", "C-normalised Jack polynomial values")->fallthrough();
    jack->add_option("--kappa", c.kappa, "partition, e.g. 2,1");
    jack->add_option("--eigs", c.eigs, "spectrum, e.g. 1,0.5")->required();
    jack->add_option("--weight", c.weight, "list every partition of this weight")->check(CLI::NonNegativeNumber);

    CLI::App* series_cmds[2];
    series_cmds[0] = app.add_subcommand("density", "density series of W at --point");
    series_cmds[1] = app.add_subcommand("cf", "characteristic-function series of W at --point");
    for (auto* s : series_cmds) {
        s->fallthrough();
        s->add_option("--model", c.model, "model JSON (family, theta, sigma, optional a)");
        s->add_option("--a", c.a, "matrix JSON for A");
        s->add_option("--point", c.point, "matrix JSON: W for density, S for cf");
        s->add_option("--spectra", c.spectra, "spectra JSON (any beta, required for beta = 8)");
        s->add_flag("--table", c.table, "print every partial sum up to --max-degree");
    }

    auto* sample = app.add_subcommand("sample", "draw X from an elliptical model as JSON lines")->fallthrough();
    sample->add_option("--model", c.model, "elliptical model JSON")->required();
    sample->add_option("--count", c.count, "number of draws")->check(CLI::PositiveNumber);
    sample->add_flag("--antithetic", c.antithetic, "pair each draw with its reflection through mu");

    auto* check = app.add_subcommand("check", "run the verification suite")->fallthrough();
    check->add_option("--suite", c.suite, "default or empty");
    check->add_option("--config", c.config, "suite config JSON: list of {check, params, N, seed}");

    auto* report = app.add_subcommand("report", "discrepancy report")->fallthrough();
    report->add_option("--input", c.input, "suite report JSON (default: run the default suite)");

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n" << "run with --help for usage\n";
        return kExitUsage;
    }
    const bool explicit_beta = beta_opt->count() > 0;
    try {
        if (*jack) {
            if (c.weight < 0 && c.kappa.empty() && jack->count("--kappa") == 0)
                throw UsageError("jack needs --kappa or --weight");
            return cmd_jack(c, out);
        }
        if (*series_cmds[0]) return cmd_series(c, explicit_beta, true, out);
        if (*series_cmds[1]) return cmd_series(c, explicit_beta, false, out);
        if (*sample) return cmd_sample(c, explicit_beta, out);
        if (*check) return cmd_check(c, out);
        if (*report) return cmd_report(c, out);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const FormatError& e) {
        err << "input error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const TruncationError& e) {
        err << "numeric error: " << e.what() << "; partial sum " << format_double(e.partial().real()) << " "
            << format_double(e.partial().imag()) << "i at degree " << e.degree() << "\n";
        return kExitNumeric;
    } catch (const Error& e) {
        err << "numeric/domain error: " << e.what() << "\n";
        return kExitNumeric;
    }
    return kExitUsage;
}

} // namespace mqf
