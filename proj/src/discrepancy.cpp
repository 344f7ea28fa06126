#include "mqf/discrepancy.hpp"

#include <sstream>

#include "mqf/elliptical.hpp"
#include "mqf/quadform.hpp"

namespace mqf {

namespace {

std::string num(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

std::string cnum(const json& z) {
    const double re = z.at("re").get<double>(), im = z.at("im").get<double>();
    if (im == 0.0) return num(re);
    return num(re) + (im < 0 ? " - " : " + ") + num(std::abs(im)) + "i";
}

const json* find_topic(const json& report, const std::string& topic) {
    if (!report.is_object() || !report.contains("checks")) return nullptr;
    for (const auto& c : report.at("checks"))
        if (c.value("topic", "") == topic) return &c;
    return nullptr;
}

std::string evidence_from(const json& report, const std::string& topic, std::string& verdict) {
    const json* c = find_topic(report, topic);
    if (!c) {
        verdict = "no matching check in the suite report";
        return verdict;
    }
    std::ostringstream os;
    os << c->at("name").get<std::string>() << ": estimate " << cnum(c->at("estimate"));
    if (c->at("exact").get<bool>())
        os << " (" << c->at("method").get<std::string>() << ")";
    else
        os << " +/- " << num(c->at("standard_error").get<double>()) << " SE, N = " << c->at("sample_count").get<std::uint64_t>();
    for (const auto& k : c->at("candidates")) {
        os << "; " << k.at("label").get<std::string>() << " = ";
        if (k.at("available").get<bool>())
            os << cnum(k.at("value"));
        else
            os << "n/a (" << k.value("note", "") << ")";
    }
    verdict = c->at("verdict").get<std::string>();
    return os.str();
}

std::string theta_evidence(const GeneratorFamily& f, double c) {
    std::ostringstream os;
    bool first = true;
    for (int b : {1, 2, 4}) {
        const Dims d{1, 1, AlgebraKind(b)};
        if (!first) os << "; ";
        first = false;
        os << "beta=" << b << ", c=" << num(c) << ": printed " << num(radial_moment_printed(f, c, d)) << ", calculus "
           << num(radial_moment(f, c, d)) << ", quadrature " << num(radial_moment_quadrature(f, c, d));
    }
    return os.str();
}

} // namespace

std::vector<DiscrepancyRow> discrepancy_rows(const json& report) {
    std::vector<DiscrepancyRow> rows;
    std::string verdict;

    rows.push_back({"radial moment theta(c), normal generator", "2^{c-1+beta} Gamma(c)", "2^c Gamma(c)",
                    theta_evidence(GeneratorFamily::normal(), 1.5),
                    "printed form agrees with the integral at beta = 1 only; the calculus value is used"});

    const GeneratorFamily p7 = GeneratorFamily::pearson7(6.0, 3.0);
    rows.push_back({"radial moment theta(c), Pearson VII generator", "g^{c-1+beta} Gamma(c) Gamma(s-c) / Gamma(s)",
                    "g^c Gamma(c) Gamma(s-c) / Gamma(s)", theta_evidence(p7, 1.5),
                    "printed form agrees with the integral at beta = 1 only; the calculus value is used"});

    {
        std::ostringstream os;
        bool first = true;
        for (int b : {1, 2, 4, 8}) {
            const Dims d{1, 1, AlgebraKind(b)};
            os << (first ? "" : "; ") << "m=n=1, beta=" << b << ": normal " << num(cf_raw_printed_prefactor(GeneratorFamily::normal(), d))
               << ", Pearson VII(s=6, g=3) " << num(cf_raw_printed_prefactor(p7, d));
            first = false;
        }
        rows.push_back({"CF series value at S = 0", "C pi^{N/2} theta_printed(N/2) / Gamma(N/2) = beta^{N/2} b^{beta-1}",
                        "1 (every characteristic function)", os.str(),
                        "series normalised so the degree-0 term is exactly 1; raw printed value logged here"});
    }

    {
        const std::string ev = evidence_from(report, "cf-argument-scale", verdict);
        rows.push_back({"CF series argument", "C_kappa(i beta Sigma S), normal fast path C_kappa(2 i beta Sigma S)",
                        "C_kappa(i Sigma S / beta): E etr(iWS) with the beta-scaled density", ev, verdict});
    }
    {
        const std::string ev = evidence_from(report, "pearson-sign", verdict);
        rows.push_back({"Pearson VII density series sign", "(s)_k / g^k, no (-1)^k",
                        "h^{(k)}(0) = (-1)^k (s)_k / g^k", ev, verdict});
    }
    {
        const std::string ev = evidence_from(report, "orbital-denominator", verdict);
        rows.push_back({"orbital integral denominator", "C_kappa(I_r), r = rank X2", "C_kappa(I_m)", ev, verdict});
    }
    {
        const std::string ev = evidence_from(report, "stiefel-denominator", verdict);
        rows.push_back({"Stiefel splitting denominator", "C_kappa(I_r), r = rank X2", "C_kappa(I_n)", ev, verdict});
    }
    {
        const std::string ev = evidence_from(report, "idempotent-closed-form", verdict);
        rows.push_back({"idempotent A, Theta = I, closed-form CF", "|I - 2i Sigma S|^{-n/2}",
                        "|I - 2i Sigma S|^{-r/2}, r = rank A", ev,
                        verdict + (verdict.rfind("matches-closed r", 0) == 0
                                       ? " (printed exponent n rejected by Monte Carlo)"
                                       : "")});
    }
    {
        const std::string ev = evidence_from(report, "density-exponent", verdict);
        rows.push_back({"density |W| exponent for rank A = r < n", "|W|^{beta(n-m+1)/2-1} with n = rows of X",
                        "exponent beta(r-m+1)/2-1: only the r rows in the range of A enter", ev, verdict});
    }
    {
        std::string ev;
        try {
            normalizing_constant(GeneratorFamily::pearson7(0.75, 1.0), 1, 1, AlgebraKind(2));
            ev = "beta=2, m=n=1, s=0.75 normalised (unexpected)";
        } catch (const Error& e) {
            ev = std::string("beta=2, m=n=1, s=0.75 (satisfies s > mn/2): ") + e.what();
        }
        rows.push_back({"Pearson VII parameter range", "s > mn/2", "s > beta m n/2 (radial integral finite)", ev,
                        "beta m n/2 enforced when a model is bound"});
    }
    return rows;
}

std::string render_discrepancy_text(const std::vector<DiscrepancyRow>& rows) {
    std::ostringstream os;
    int i = 1;
    for (const auto& r : rows) {
        os << "[" << i++ << "] " << r.topic << "\n";
        os << "    printed : " << r.printed << "\n";
        os << "    derived : " << r.derived << "\n";
        os << "    evidence: " << r.evidence << "\n";
        os << "    status  : " << r.status << "\n";
    }
    return os.str();
}

namespace {

std::string csv_field(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

} // namespace

std::string render_discrepancy_csv(const std::vector<DiscrepancyRow>& rows) {
    std::ostringstream os;
    os << "topic,printed,derived,evidence,status\n";
    for (const auto& r : rows)
        os << csv_field(r.topic) << ',' << csv_field(r.printed) << ',' << csv_field(r.derived) << ','
           << csv_field(r.evidence) << ',' << csv_field(r.status) << "\n";
    return os.str();
}

json discrepancy_json(const std::vector<DiscrepancyRow>& rows) {
    json j = json::array();
    for (const auto& r : rows)
        j.push_back({{"topic", r.topic}, {"printed", r.printed}, {"derived", r.derived}, {"evidence", r.evidence},
                     {"status", r.status}});
    return j;
}

} // namespace mqf
