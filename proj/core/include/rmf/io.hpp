#pragma once

#include <iosfwd>
#include <string>

#include "rmf/classify.hpp"

namespace rmf {

// Sampled-curve CSV: header "s,x1,...,xn", one row per sample, LF endings.
void write_curve_csv(std::ostream& os, const Curve& curve);
void write_curve_csv_file(const std::string& path, const Curve& curve);
Curve read_curve_csv(std::istream& is, const std::string& source_name = "<stream>");
Curve read_curve_csv_file(const std::string& path);

// Curvature CSV: header "s,k1,...,k{n-1}[,kappa,tau,theta]".
void write_curvature_csv(std::ostream& os, const CurvatureField& field);
void write_curvature_csv_file(const std::string& path, const CurvatureField& field);

// Frame-field JSON: array of {"s": ..., "xi": [[...], ...]} with row-major
// frame vectors (xi[i] is the i-th frame vector).
std::string framefield_json(const FrameField& field);
FrameField framefield_from_json(const std::string& text);

std::string rectifying_spec_json(const RectifyingSpec& spec);
RectifyingSpec rectifying_spec_from_json(const std::string& text);

// Classification report JSON: {class: {verdict, residual, params, degenerate[, note]}}.
std::string classification_json(const ClassificationReport& report);

// One polyline per curve, orthographic projection onto two coordinate axes,
// viewBox autoscaled with a 5% margin, stroke width 1.
void write_svg_polyline(std::ostream& os, const Curve& curve, int axis_x, int axis_y);
void write_svg_polyline_file(const std::string& path, const Curve& curve, int axis_x, int axis_y);

void write_text_file(const std::string& path, const std::string& text);

}  // namespace rmf
