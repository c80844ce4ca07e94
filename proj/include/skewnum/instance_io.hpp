#pragma once

#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "skewnum/inequality.hpp"
#include "skewnum/matrix.hpp"
#include "skewnum/tensor.hpp"

namespace skewnum {

/// On-disk instance: a joint state over listed factor dimensions, one
/// observable per factor, and an optional exponent. JSON layout:
///   {"dims":[2,2],"rho":[[7,5,5,6],...],"k":[[[10,1],[1,1]],...],"p":0.5}
/// Matrix entries are bare numbers (real) or two-element arrays [re, im].
struct InstanceFile {
    std::vector<int> dims;
    HermitianMatrix rho;
    std::vector<HermitianMatrix> observables;
    std::optional<double> p;
};

namespace detail {

using nlohmann::ordered_json;

inline Complex entry_from_json(const ordered_json& e) {
    if (e.is_number()) return Complex(e.get<double>(), 0.0);
    if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number())
        return Complex(e[0].get<double>(), e[1].get<double>());
    throw std::invalid_argument(
        "instance file: matrix entries must be numbers or [re, im] pairs");
}

inline ordered_json entry_to_json(Complex z) {
    if (z.imag() == 0.0 && !std::signbit(z.imag())) return ordered_json(z.real());
    return ordered_json::array({z.real(), z.imag()});
}

inline Matrix matrix_from_json(const ordered_json& m, int expected_dim,
                               const std::string& what) {
    if (!m.is_array() || static_cast<int>(m.size()) != expected_dim)
        throw std::invalid_argument("instance file: " + what + " must be a " +
                                    std::to_string(expected_dim) + "x" +
                                    std::to_string(expected_dim) + " matrix");
    Matrix out = Matrix::zero(expected_dim);
    for (int i = 0; i < expected_dim; ++i) {
        const auto& row = m[static_cast<std::size_t>(i)];
        if (!row.is_array() || static_cast<int>(row.size()) != expected_dim)
            throw std::invalid_argument("instance file: " + what + " row " + std::to_string(i) +
                                        " has the wrong length");
        for (int j = 0; j < expected_dim; ++j)
            out(i, j) = entry_from_json(row[static_cast<std::size_t>(j)]);
    }
    return out;
}

/// One matrix row per output line; scalar formatting is delegated to the
/// JSON library so parsing the text reproduces every double bitwise.
inline void matrix_to_text(std::string& out, const Matrix& m, const std::string& indent) {
    out += "[\n";
    for (int i = 0; i < m.dim(); ++i) {
        out += indent + "  [";
        for (int j = 0; j < m.dim(); ++j) {
            if (j) out += ", ";
            out += entry_to_json(m(i, j)).dump();
        }
        out += i + 1 < m.dim() ? "],\n" : "]\n";
    }
    out += indent + "]";
}

}  // namespace detail

inline InstanceFile parse_instance_json(const std::string& text) {
    detail::ordered_json j;
    try {
        j = detail::ordered_json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("instance file: invalid JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("dims") || !j.contains("rho") || !j.contains("k"))
        throw std::invalid_argument("instance file: expected object with dims, rho, k");

    std::vector<int> dims;
    for (const auto& d : j.at("dims")) {
        if (!d.is_number_integer() || d.get<int>() < 1)
            throw std::invalid_argument("instance file: dims must be positive integers");
        dims.push_back(d.get<int>());
    }
    if (dims.empty()) throw std::invalid_argument("instance file: dims must be nonempty");

    int joint = 1;
    for (int d : dims) joint *= d;

    HermitianMatrix rho(detail::matrix_from_json(j.at("rho"), joint, "rho"));

    const auto& ks = j.at("k");
    if (!ks.is_array() || ks.size() != dims.size())
        throw std::invalid_argument("instance file: k must list one matrix per factor");
    std::vector<HermitianMatrix> observables;
    observables.reserve(dims.size());
    for (std::size_t i = 0; i < dims.size(); ++i)
        observables.emplace_back(
            detail::matrix_from_json(ks[i], dims[i], "k[" + std::to_string(i) + "]"));

    std::optional<double> p;
    if (j.contains("p")) {
        if (!j.at("p").is_number())
            throw std::invalid_argument("instance file: p must be a number");
        p = j.at("p").get<double>();
    }
    return InstanceFile{std::move(dims), std::move(rho), std::move(observables), p};
}

inline std::string write_instance_json(const InstanceFile& f) {
    std::string out = "{\n  \"dims\": [";
    for (std::size_t i = 0; i < f.dims.size(); ++i) {
        if (i) out += ", ";
        out += std::to_string(f.dims[i]);
    }
    out += "],\n  \"rho\": ";
    detail::matrix_to_text(out, f.rho.matrix(), "  ");
    out += ",\n  \"k\": [\n";
    for (std::size_t i = 0; i < f.observables.size(); ++i) {
        out += "    ";
        detail::matrix_to_text(out, f.observables[i].matrix(), "    ");
        out += i + 1 < f.observables.size() ? ",\n" : "\n";
    }
    out += "  ]";
    if (f.p) out += ",\n  \"p\": " + detail::ordered_json(*f.p).dump();
    out += "\n}\n";
    return out;
}

inline InstanceFile load_instance_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("instance file: cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_instance_json(buf.str());
}

inline void save_instance_file(const InstanceFile& f, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::invalid_argument("instance file: cannot write " + path);
    out << write_instance_json(f);
    if (!out) throw std::invalid_argument("instance file: write failed for " + path);
}

/// The exponent precedence is: explicit override, then the file's own p,
/// then 1/2.
inline double resolve_exponent(const InstanceFile& f, std::optional<double> p_override) {
    if (p_override) return *p_override;
    if (f.p) return *f.p;
    return 0.5;
}

inline BipartiteInstance to_bipartite(const InstanceFile& f,
                                      std::optional<double> p_override = std::nullopt) {
    if (f.dims.size() != 2)
        throw std::invalid_argument("instance file: expected exactly 2 factors, got " +
                                    std::to_string(f.dims.size()));
    return BipartiteInstance(MultipartiteOperator(f.rho, f.dims), f.observables[0],
                             f.observables[1], resolve_exponent(f, p_override));
}

inline TripartiteInstance to_tripartite(const InstanceFile& f,
                                        std::optional<double> p_override = std::nullopt) {
    if (f.dims.size() != 3)
        throw std::invalid_argument("instance file: expected exactly 3 factors, got " +
                                    std::to_string(f.dims.size()));
    return TripartiteInstance(MultipartiteOperator(f.rho, f.dims), f.observables[0],
                              f.observables[1], f.observables[2],
                              resolve_exponent(f, p_override));
}

inline InstanceFile from_bipartite(const BipartiteInstance& inst) {
    return InstanceFile{inst.rho12.dims, inst.rho12.matrix, {inst.k1, inst.k2}, inst.p};
}

inline InstanceFile from_tripartite(const TripartiteInstance& inst) {
    return InstanceFile{
        inst.rho123.dims, inst.rho123.matrix, {inst.k1, inst.k2, inst.k3}, inst.p};
}

}  // namespace skewnum
