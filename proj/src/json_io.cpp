#include "mqf/json_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace mqf {

json matrix_to_json(const DAMatrix& m) {
    json data = json::array();
    for (int i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (int j = 0; j < m.cols(); ++j) {
            json e = json::array();
            for (int c = 0; c < m.beta(); ++c) e.push_back(m.comp(i, j, c));
            row.push_back(std::move(e));
        }
        data.push_back(std::move(row));
    }
    return {{"beta", m.beta()}, {"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

DAMatrix matrix_from_json(const json& j) {
    try {
        // Shorthand: [[1, 0], [0, 2]] is a real (beta = 1) matrix.
        if (j.is_array()) {
            const int rows = static_cast<int>(j.size());
            const int cols = rows > 0 && j[0].is_array() ? static_cast<int>(j[0].size()) : 0;
            return matrix_from_json({{"beta", 1}, {"rows", rows}, {"cols", cols}, {"data", j}});
        }
        const AlgebraKind beta(j.at("beta").get<int>());
        const int rows = j.at("rows").get<int>();
        const int cols = j.at("cols").get<int>();
        const json& data = j.at("data");
        if (!data.is_array() || static_cast<int>(data.size()) != rows)
            throw FormatError("matrix: 'data' must have 'rows' rows");
        DAMatrix m(beta, rows, cols);
        for (int i = 0; i < rows; ++i) {
            const json& row = data[i];
            if (!row.is_array() || static_cast<int>(row.size()) != cols)
                throw FormatError("matrix: row " + std::to_string(i) + " must have 'cols' entries");
            for (int c = 0; c < cols; ++c) {
                const json& e = row[c];
                // A bare number is accepted as the real component.
                if (e.is_number()) {
                    m.comp(i, c, 0) = e.get<double>();
                    continue;
                }
                if (!e.is_array() || static_cast<int>(e.size()) != beta.beta())
                    throw FormatError("matrix: entry (" + std::to_string(i) + "," + std::to_string(c) + ") must have " +
                                      std::to_string(beta.beta()) + " components");
                for (int k = 0; k < beta.beta(); ++k) m.comp(i, c, k) = e[k].get<double>();
            }
        }
        return m;
    } catch (const json::exception& e) {
        throw FormatError(std::string("matrix: ") + e.what());
    }
}

DAMatrix promote(const DAMatrix& m, AlgebraKind target) {
    if (m.algebra() == target) return m;
    if (m.beta() != 1)
        throw FormatError("matrix: beta " + std::to_string(m.beta()) + " entries cannot be used where beta " +
                          std::to_string(target.beta()) + " is expected");
    DAMatrix out(target, m.rows(), m.cols());
    for (int i = 0; i < m.rows(); ++i)
        for (int c = 0; c < m.cols(); ++c) out.comp(i, c, 0) = m.comp(i, c, 0);
    return out;
}

DAMatrix matrix_from_json(const json& j, AlgebraKind target) { return promote(matrix_from_json(j), target); }

HermitianMatrix hermitian_from_json(const json& j) { return HermitianMatrix(matrix_from_json(j)); }

HermitianMatrix hermitian_from_json(const json& j, AlgebraKind target) {
    return HermitianMatrix(matrix_from_json(j, target));
}

json family_to_json(const GeneratorFamily& f) {
    switch (f.kind) {
    case GeneratorFamily::Kind::Normal: return {{"kind", "normal"}};
    case GeneratorFamily::Kind::PearsonVII: return {{"kind", "pearson7"}, {"s", f.s}, {"g", f.g}};
    case GeneratorFamily::Kind::StudentT: return {{"kind", "t"}, {"g", f.g}};
    case GeneratorFamily::Kind::Cauchy: return {{"kind", "cauchy"}};
    }
    return {};
}

GeneratorFamily family_from_json(const json& j) {
    try {
        const std::string kind = j.at("kind").get<std::string>();
        if (kind == "normal") return GeneratorFamily::normal();
        if (kind == "pearson7") return GeneratorFamily::pearson7(j.at("s").get<double>(), j.at("g").get<double>());
        if (kind == "t") return GeneratorFamily::student_t(j.at("g").get<double>());
        if (kind == "cauchy") return GeneratorFamily::cauchy();
        throw FormatError("family: unknown kind '" + kind + "'");
    } catch (const json::exception& e) {
        throw FormatError(std::string("family: ") + e.what());
    }
}

json model_to_json(const EllipticalModel& m) {
    return {{"family", family_to_json(m.family)},
            {"beta", m.beta.beta()},
            {"mu", matrix_to_json(m.mu)},
            {"theta", matrix_to_json(m.theta.matrix())},
            {"sigma", matrix_to_json(m.sigma.matrix())}};
}

EllipticalModel model_from_json(const json& j) {
    try {
        EllipticalModel m;
        m.beta = AlgebraKind(j.at("beta").get<int>());
        m.family = family_from_json(j.at("family"));
        m.theta = hermitian_from_json(j.at("theta"), m.beta);
        m.sigma = hermitian_from_json(j.at("sigma"), m.beta);
        m.mu = j.contains("mu") ? matrix_from_json(j.at("mu"), m.beta) : DAMatrix(m.beta, m.theta.dim(), m.sigma.dim());
        m.validate();
        return m;
    } catch (const json::exception& e) {
        throw FormatError(std::string("model: ") + e.what());
    }
}

json complex_to_json(std::complex<double> z) { return {{"re", z.real()}, {"im", z.imag()}}; }

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw FormatError("'" + path + "': " + e.what());
    }
}

std::string format_double(double v) {
    if (std::isnan(v)) return "NaN";
    if (std::isinf(v)) return v > 0 ? "Infinity" : "-Infinity";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

void emit(const json& j, int indent, int depth, std::string& out) {
    const auto newline = [&](int d) {
        if (indent < 0) return;
        out += '\n';
        out.append(static_cast<std::size_t>(indent * d), ' ');
    };
    switch (j.type()) {
    case json::value_t::object: {
        if (j.empty()) {
            out += "{}";
            return;
        }
        out += '{';
        bool first = true;
        for (auto it = j.begin(); it != j.end(); ++it) {
            if (!first) out += ',';
            first = false;
            newline(depth + 1);
            out += json(it.key()).dump();
            out += indent < 0 ? ":" : ": ";
            emit(it.value(), indent, depth + 1, out);
        }
        newline(depth);
        out += '}';
        return;
    }
    case json::value_t::array: {
        if (j.empty()) {
            out += "[]";
            return;
        }
        out += '[';
        bool first = true;
        for (const auto& v : j) {
            if (!first) out += ',';
            first = false;
            newline(depth + 1);
            emit(v, indent, depth + 1, out);
        }
        newline(depth);
        out += ']';
        return;
    }
    case json::value_t::number_float: {
        const double v = j.get<double>();
        // JSON has no NaN/Infinity; emit them as strings.
        out += std::isfinite(v) ? format_double(v) : "\"" + format_double(v) + "\"";
        return;
    }
    default: out += j.dump(); return;
    }
}

} // namespace

std::string dump_json(const json& j, int indent) {
    std::string out;
    emit(j, indent, 0, out);
    return out;
}

} // namespace mqf
