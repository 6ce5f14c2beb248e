#include "masi/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "masi/format.hpp"

namespace masi {

namespace {

CMatrix matrix_from_parts(const json& doc) {
    if (!doc.contains("dim") || !doc["dim"].is_number_integer()) {
        throw validation_error("matrix file: missing integer field 'dim'");
    }
    const int dim = doc["dim"].get<int>();
    if (dim < 1) {
        throw validation_error("matrix file: dim must be >= 1");
    }
    for (const char* part : {"re", "im"}) {
        if (!doc.contains(part) || !doc[part].is_array() ||
            static_cast<int>(doc[part].size()) != dim) {
            throw validation_error(std::string("matrix file: field '") + part +
                                   "' must be a " + std::to_string(dim) + "x" +
                                   std::to_string(dim) + " array");
        }
    }
    CMatrix m(dim, dim);
    for (int j = 0; j < dim; ++j) {
        const auto& re_row = doc["re"][static_cast<std::size_t>(j)];
        const auto& im_row = doc["im"][static_cast<std::size_t>(j)];
        if (!re_row.is_array() || !im_row.is_array() ||
            static_cast<int>(re_row.size()) != dim || static_cast<int>(im_row.size()) != dim) {
            throw validation_error("matrix file: row " + std::to_string(j) +
                                   " has wrong length");
        }
        for (int k = 0; k < dim; ++k) {
            m(j, k) = Complex(re_row[static_cast<std::size_t>(k)].get<double>(),
                              im_row[static_cast<std::size_t>(k)].get<double>());
        }
    }
    return m;
}

} // namespace

ParsedMatrix parse_matrix_json(const json& doc) {
    if (!doc.contains("kind") || !doc["kind"].is_string()) {
        throw validation_error("matrix file: missing string field 'kind'");
    }
    const std::string kind = doc["kind"].get<std::string>();
    if (kind != "state" && kind != "observable") {
        throw validation_error("matrix file: kind must be 'state' or 'observable', got '" +
                               kind + "'");
    }
    CMatrix m = matrix_from_parts(doc);
    if (kind == "observable") {
        return HermitianMatrix(std::move(m));
    }
    const double tr = m.trace().real();
    if (!(std::abs(tr - 1.0) <= 1e-6)) {
        throw validation_error("state file: trace is " + format_double(tr) +
                               ", deficit " + format_double(tr - 1.0) +
                               " exceeds the 1e-6 normalization window");
    }
    m /= tr;
    return DensityMatrix(HermitianMatrix(std::move(m)));
}

ParsedMatrix parse_matrix_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw validation_error("cannot open matrix file '" + path + "'");
    }
    json doc;
    try {
        doc = json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw validation_error("matrix file '" + path + "': " + e.what());
    }
    return parse_matrix_json(doc);
}

json matrix_to_json(const CMatrix& m, const std::string& kind) {
    json doc;
    doc["kind"] = kind;
    doc["dim"] = static_cast<int>(m.rows());
    json re = json::array();
    json im = json::array();
    for (Eigen::Index j = 0; j < m.rows(); ++j) {
        json re_row = json::array();
        json im_row = json::array();
        for (Eigen::Index k = 0; k < m.cols(); ++k) {
            re_row.push_back(m(j, k).real());
            im_row.push_back(m(j, k).imag());
        }
        re.push_back(std::move(re_row));
        im.push_back(std::move(im_row));
    }
    doc["re"] = std::move(re);
    doc["im"] = std::move(im);
    return doc;
}

json report_to_json(const SkewInfoReport& report) {
    json doc;
    doc["method"] = to_string(report.method);
    doc["value"] = report.value;
    if (!report.generator.empty()) doc["generator"] = report.generator;
    if (!report.metric.empty()) doc["metric"] = report.metric;
    doc["terms"] = json(report.terms);
    doc["diagnostics"] = {
        {"min_eigenvalue", report.diagnostics.min_eigenvalue},
        {"boundary_kernel_used", report.diagnostics.boundary_kernel_used},
    };
    if (report.alternate_value) {
        doc["alternate_value"] = *report.alternate_value;
        doc["normalization_discrepancy"] = report.normalization_discrepancy;
    }
    return doc;
}

json report_to_json(const CertificationReport& report, const std::string& target) {
    json doc;
    doc["target"] = target;
    doc["verdict"] = to_string(report.verdict);
    doc["order"] = report.order;
    doc["trials"] = report.trials;
    doc["seed"] = report.seed;
    doc["worst_scaled_eigenvalue"] = report.worst_eigenvalue;
    doc["tolerance"] = kPsdTol;
    if (report.witness_points) {
        doc["witness"] = {{"points", *report.witness_points}};
    } else if (report.witness_pair) {
        doc["witness"] = {{"x", matrix_to_json(report.witness_pair->first, "observable")},
                          {"y", matrix_to_json(report.witness_pair->second, "observable")}};
    }
    return doc;
}

namespace {

void flatten(const json& node, const std::string& prefix, std::ostringstream& out) {
    if (node.is_object()) {
        for (const auto& [key, value] : node.items()) {
            flatten(value, prefix.empty() ? key : prefix + "." + key, out);
        }
    } else if (node.is_array()) {
        for (std::size_t i = 0; i < node.size(); ++i) {
            flatten(node[i], prefix + "[" + std::to_string(i) + "]", out);
        }
    } else {
        out << prefix << ",";
        if (node.is_number_float()) {
            out << format_double(node.get<double>());
        } else if (node.is_string()) {
            out << node.get<std::string>();
        } else {
            out << node.dump();
        }
        out << "\n";
    }
}

} // namespace

std::string json_to_csv(const json& doc) {
    std::ostringstream out;
    out << "key,value\n";
    flatten(doc, "", out);
    return out.str();
}

} // namespace masi
