#include "rmf/io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "rmf/numfmt.hpp"

namespace rmf {

namespace {

using ordered_json = nlohmann::ordered_json;

std::ofstream open_out(const std::string& path) {
    std::ofstream os(path, std::ios::binary);  // binary: LF endings everywhere
    if (!os) throw IoError("cannot open '" + path + "' for writing");
    return os;
}

}  // namespace

void write_curve_csv(std::ostream& os, const Curve& curve) {
    if (!curve.is_sampled()) throw UsageError("write_curve_csv: expects a sampled curve");
    os << "s";
    for (int i = 1; i <= curve.dim(); ++i) os << ",x" << i;
    os << "\n";
    for (std::size_t i = 0; i < curve.params().size(); ++i) {
        os << format_real(curve.params()[i]);
        const Vec& p = curve.points()[i];
        for (Eigen::Index j = 0; j < p.size(); ++j) os << "," << format_real(p[j]);
        os << "\n";
    }
}

void write_curve_csv_file(const std::string& path, const Curve& curve) {
    auto os = open_out(path);
    write_curve_csv(os, curve);
}

Curve read_curve_csv(std::istream& is, const std::string& source_name) {
    std::string line;
    if (!std::getline(is, line)) throw IoError(source_name + ": empty file");
    // Header "s,x1,...,xn" fixes the dimension.
    int dim = 0;
    {
        std::stringstream header(line);
        std::string cell;
        if (!std::getline(header, cell, ',') || cell != "s") {
            throw IoError(source_name + ":1: expected header starting with 's'");
        }
        while (std::getline(header, cell, ',')) ++dim;
        if (dim < 2) throw IoError(source_name + ":1: need at least two coordinate columns");
    }

    std::vector<double> params;
    std::vector<Vec> points;
    int lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::stringstream row(line);
        std::string cell;
        std::vector<double> values;
        while (std::getline(row, cell, ',')) {
            char* end = nullptr;
            double v = std::strtod(cell.c_str(), &end);
            if (end == cell.c_str() || *end != '\0') {
                throw IoError(source_name + ":" + std::to_string(lineno) + ": bad number '" + cell + "'");
            }
            values.push_back(v);
        }
        if (static_cast<int>(values.size()) != dim + 1) {
            throw IoError(source_name + ":" + std::to_string(lineno) + ": expected " + std::to_string(dim + 1) +
                          " columns, got " + std::to_string(values.size()));
        }
        params.push_back(values[0]);
        Vec p(dim);
        for (int j = 0; j < dim; ++j) p[j] = values[j + 1];
        points.push_back(std::move(p));
    }
    if (params.empty()) throw UsageError(source_name + ": no samples");
    try {
        return Curve::sampled(std::move(params), std::move(points));
    } catch (const UsageError& e) {
        throw IoError(source_name + ": " + e.what());
    }
}

Curve read_curve_csv_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("cannot open '" + path + "' for reading");
    return read_curve_csv(is, path);
}

void write_curvature_csv(std::ostream& os, const CurvatureField& field) {
    os << "s";
    for (int i = 1; i <= field.normals(); ++i) os << ",k" << i;
    if (field.has_frenet()) os << ",kappa,tau,theta";
    os << "\n";
    for (std::size_t i = 0; i < field.size(); ++i) {
        os << format_real(field.s[i]);
        for (Eigen::Index j = 0; j < field.k[i].size(); ++j) os << "," << format_real(field.k[i][j]);
        if (field.has_frenet()) {
            os << "," << format_real(field.kappa[i]) << "," << format_real(field.tau[i]) << ","
               << format_real(field.theta.empty() ? 0.0 : field.theta[i]);
        }
        os << "\n";
    }
}

void write_curvature_csv_file(const std::string& path, const CurvatureField& field) {
    auto os = open_out(path);
    write_curvature_csv(os, field);
}

std::string framefield_json(const FrameField& field) {
    ordered_json arr = ordered_json::array();
    for (const Frame& fr : field.frames) {
        ordered_json rec;
        rec["s"] = round_emitted(fr.s);
        ordered_json vecs = ordered_json::array();
        for (int i = 1; i <= fr.dim(); ++i) {
            ordered_json row = ordered_json::array();
            const Vec v = fr.xi(i);
            for (Eigen::Index j = 0; j < v.size(); ++j) row.push_back(round_emitted(v[j]));
            vecs.push_back(std::move(row));
        }
        rec["xi"] = std::move(vecs);
        arr.push_back(std::move(rec));
    }
    return arr.dump(2) + "\n";
}

FrameField framefield_from_json(const std::string& text) {
    ordered_json arr;
    try {
        arr = ordered_json::parse(text);
    } catch (const std::exception& e) {
        throw IoError(std::string("frame field JSON: ") + e.what());
    }
    if (!arr.is_array() || arr.empty()) throw IoError("frame field JSON: expected a non-empty array");

    FrameField field;
    for (const auto& rec : arr) {
        Frame fr;
        fr.s = rec.at("s").get<double>();
        const auto& vecs = rec.at("xi");
        const int n = static_cast<int>(vecs.size());
        fr.m.resize(n, n);
        for (int i = 0; i < n; ++i) {
            const auto& row = vecs.at(i);
            if (static_cast<int>(row.size()) != n) throw IoError("frame field JSON: ragged xi matrix");
            for (int j = 0; j < n; ++j) fr.m(j, i) = row.at(j).get<double>();
        }
        field.frames.push_back(std::move(fr));
    }
    return field;
}

std::string rectifying_spec_json(const RectifyingSpec& spec) {
    ordered_json j;
    j["n"] = spec.n;
    j["type_index"] = spec.type_index;
    ordered_json cs = ordered_json::array();
    for (double c : spec.constants) cs.push_back(round_emitted(c));
    j["constants"] = std::move(cs);
    if (spec.derived()) {
        ordered_json fc = ordered_json::array();
        for (double c : spec.free_coeff) fc.push_back(round_emitted(c));
        j["free_coeff"] = std::move(fc);
    }
    return j.dump(2) + "\n";
}

RectifyingSpec rectifying_spec_from_json(const std::string& text) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const std::exception& e) {
        throw IoError(std::string("rectifying spec JSON: ") + e.what());
    }
    RectifyingSpec spec;
    spec.n = j.at("n").get<int>();
    spec.type_index = j.at("type_index").get<int>();
    spec.constants = j.at("constants").get<std::vector<double>>();
    if (j.contains("free_coeff")) spec.free_coeff = j.at("free_coeff").get<std::vector<double>>();
    spec.check_shape();
    return spec;
}

std::string classification_json(const ClassificationReport& report) {
    ordered_json j;
    for (const auto& [name, entry] : report.entries) {
        ordered_json e;
        e["verdict"] = to_string(entry.verdict);
        e["residual"] = round_emitted(entry.residual);
        ordered_json params = ordered_json::array();
        for (double p : entry.params) params.push_back(round_emitted(p));
        e["params"] = std::move(params);
        e["degenerate"] = entry.degenerate;
        if (!entry.note.empty()) e["note"] = entry.note;
        j[name] = std::move(e);
    }
    return j.dump(2) + "\n";
}

void write_svg_polyline(std::ostream& os, const Curve& curve, int axis_x, int axis_y) {
    if (!curve.is_sampled()) throw UsageError("write_svg_polyline: expects a sampled curve");
    if (axis_x < 0 || axis_y < 0 || axis_x >= curve.dim() || axis_y >= curve.dim() || axis_x == axis_y) {
        throw UsageError("write_svg_polyline: bad projection axes");
    }
    double xmin = 0, xmax = 0, ymin = 0, ymax = 0;
    bool first = true;
    for (const Vec& p : curve.points()) {
        const double x = p[axis_x], y = -p[axis_y];  // flip y: SVG is y-down
        if (first) {
            xmin = xmax = x;
            ymin = ymax = y;
            first = false;
        } else {
            xmin = std::min(xmin, x);
            xmax = std::max(xmax, x);
            ymin = std::min(ymin, y);
            ymax = std::max(ymax, y);
        }
    }
    const double mx = 0.05 * std::max(xmax - xmin, 1e-12);
    const double my = 0.05 * std::max(ymax - ymin, 1e-12);

    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" << format_real(xmin - mx) << " "
       << format_real(ymin - my) << " " << format_real((xmax - xmin) + 2 * mx) << " "
       << format_real((ymax - ymin) + 2 * my) << "\">\n";
    os << "  <polyline fill=\"none\" stroke=\"black\" stroke-width=\"1\" vector-effect=\"non-scaling-stroke\" points=\"";
    for (std::size_t i = 0; i < curve.points().size(); ++i) {
        const Vec& p = curve.points()[i];
        if (i) os << " ";
        os << format_real(p[axis_x]) << "," << format_real(-p[axis_y]);
    }
    os << "\"/>\n</svg>\n";
}

void write_svg_polyline_file(const std::string& path, const Curve& curve, int axis_x, int axis_y) {
    auto os = open_out(path);
    write_svg_polyline(os, curve, axis_x, axis_y);
}

void write_text_file(const std::string& path, const std::string& text) {
    auto os = open_out(path);
    os << text;
}

}  // namespace rmf
