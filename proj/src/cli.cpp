#include "ordstat/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace ordstat::cli {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

// ---------------------------------------------------------------------------
// scenario parsing

[[noreturn]] void fail_at(const std::string& pointer, const std::string& message) {
  throw ScenarioParseError((pointer.empty() ? std::string("/") : pointer) + ": " + message);
}

void reject_unknown_keys(const json& obj, const std::string& pointer, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) fail_at(pointer, "expected an object");
  for (const auto& item : obj.items()) {
    const bool known = std::any_of(allowed.begin(), allowed.end(),
                                   [&](const char* k) { return item.key() == k; });
    if (!known) fail_at(pointer + "/" + item.key(), "unknown key '" + item.key() + "'");
  }
}

const json& require_key(const json& obj, const std::string& pointer, const char* key) {
  if (!obj.contains(key)) fail_at(pointer, std::string("missing required key '") + key + "'");
  return obj.at(key);
}

double number_at(const json& v, const std::string& pointer) {
  if (!v.is_number()) fail_at(pointer, "expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) fail_at(pointer, "expected a finite number");
  return d;
}

int integer_at(const json& v, const std::string& pointer) {
  if (!v.is_number_integer()) fail_at(pointer, "expected an integer");
  return v.get<int>();
}

std::string string_at(const json& v, const std::string& pointer) {
  if (!v.is_string()) fail_at(pointer, "expected a string");
  return v.get<std::string>();
}

std::vector<double> number_list(const json& v, const std::string& pointer) {
  if (!v.is_array()) fail_at(pointer, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(number_at(v[i], pointer + "/" + std::to_string(i)));
  return out;
}

// Scalar or array; the boolean reports whether it was a scalar.
std::pair<std::vector<double>, bool> scalar_or_list(const json& v, const std::string& pointer) {
  if (v.is_array()) return {number_list(v, pointer), false};
  return {{number_at(v, pointer)}, true};
}

template <class F>
auto rethrow_as_parse_error(const std::string& pointer, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const ScenarioParseError&) {
    throw;
  } catch (const std::exception& e) {
    fail_at(pointer, e.what());
  }
}

BaselinePtr parse_baseline(const json& v) {
  const std::string p = "/baseline";
  const std::string family = string_at(require_key(v, p, "family"), p + "/family");
  if (family == "weibull") {
    reject_unknown_keys(v, p, {"family", "a", "b"});
    const double a = number_at(require_key(v, p, "a"), p + "/a");
    const double b = number_at(require_key(v, p, "b"), p + "/b");
    return rethrow_as_parse_error(p, [&] { return make_weibull(a, b); });
  }
  if (family == "exponential") {
    reject_unknown_keys(v, p, {"family", "rate"});
    const double rate = number_at(require_key(v, p, "rate"), p + "/rate");
    return rethrow_as_parse_error(p, [&] { return make_exponential(rate); });
  }
  fail_at(p + "/family", "unknown baseline family '" + family + "'");
}

GeneratorPtr parse_generator(const json& v) {
  const std::string p = "/generator";
  reject_unknown_keys(v, p, {"name", "params"});
  const std::string name = string_at(require_key(v, p, "name"), p + "/name");
  std::vector<double> params;
  if (v.contains("params")) params = number_list(v.at("params"), p + "/params");
  return rethrow_as_parse_error(p, [&] { return builtin_generator(name, params); });
}

SampleSide parse_side(const json& v, const std::string& p, const BaselinePtr& baseline,
                      const GeneratorPtr& generator) {
  if (!v.is_object()) fail_at(p, "expected an object");
  if (v.contains("multiple_outlier")) {
    reject_unknown_keys(v, p, {"multiple_outlier"});
    const std::string q = p + "/multiple_outlier";
    const json& mo = v.at("multiple_outlier");
    reject_unknown_keys(mo, q, {"alpha", "lambda1", "lambda2", "p", "q"});
    MultipleOutlierSpec s;
    s.alpha = number_at(require_key(mo, q, "alpha"), q + "/alpha");
    s.lambda_out = number_at(require_key(mo, q, "lambda1"), q + "/lambda1");
    s.lambda_main = number_at(require_key(mo, q, "lambda2"), q + "/lambda2");
    s.p = integer_at(require_key(mo, q, "p"), q + "/p");
    s.q = integer_at(require_key(mo, q, "q"), q + "/q");
    s.baseline = baseline;
    rethrow_as_parse_error(q, [&] { s.validate(); });
    return s;
  }
  reject_unknown_keys(v, p, {"alpha", "lambda", "n"});
  auto [alpha, alpha_scalar] = scalar_or_list(require_key(v, p, "alpha"), p + "/alpha");
  auto [lambda, lambda_scalar] = scalar_or_list(require_key(v, p, "lambda"), p + "/lambda");
  std::size_t n = 0;
  if (v.contains("n")) {
    const int given = integer_at(v.at("n"), p + "/n");
    if (given < 1) fail_at(p + "/n", "sample size must be positive");
    n = static_cast<std::size_t>(given);
  }
  if (!alpha_scalar) n = n ? n : alpha.size();
  if (!lambda_scalar) n = n ? n : lambda.size();
  if (n == 0) fail_at(p, "scalar alpha and lambda need an explicit 'n'");
  if (!alpha_scalar && alpha.size() != n) fail_at(p + "/alpha", "length differs from the sample size");
  if (!lambda_scalar && lambda.size() != n) fail_at(p + "/lambda", "length differs from the sample size");
  if (alpha_scalar) alpha.assign(n, alpha.front());
  if (lambda_scalar) lambda.assign(n, lambda.front());

  DependentSampleSpec s;
  s.generator = generator;
  for (std::size_t i = 0; i < n; ++i) s.marginals.push_back({alpha[i], lambda[i], baseline});
  rethrow_as_parse_error(p, [&] { s.validate(); });
  return s;
}

Grid parse_grid(const json& v) {
  const std::string p = "/grid";
  reject_unknown_keys(v, p, {"u_min", "u_max", "points"});
  double u_min = 1e-3;
  double u_max = 1.0;
  int points = 1000;
  if (v.contains("u_min")) u_min = number_at(v.at("u_min"), p + "/u_min");
  if (v.contains("u_max")) u_max = number_at(v.at("u_max"), p + "/u_max");
  if (v.contains("points")) points = integer_at(v.at("points"), p + "/points");
  if (points < 2) fail_at(p + "/points", "need at least 2 points");
  return rethrow_as_parse_error(p, [&] { return Grid::uniform(u_min, u_max, static_cast<std::size_t>(points)); });
}

std::pair<std::size_t, std::size_t> line_and_column(const std::string& text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t col = 1;
  for (std::size_t i = 0; i < text.size() && i + 1 < byte; ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

// Grid parameters are not stored by Grid itself; recover them for export.
struct GridShape {
  double u_min;
  double u_max;
  std::size_t points;
};

GridShape grid_shape(const Grid& g) { return {g.u().front(), g.u().back(), g.size()}; }

json side_to_json(const SampleSide& side) {
  if (const auto* mo = std::get_if<MultipleOutlierSpec>(&side)) {
    return {{"multiple_outlier",
             {{"alpha", mo->alpha}, {"lambda1", mo->lambda_out}, {"lambda2", mo->lambda_main}, {"p", mo->p}, {"q", mo->q}}}};
  }
  const auto& dep = std::get<DependentSampleSpec>(side);
  json alpha = json::array();
  json lambda = json::array();
  for (const auto& m : dep.marginals) {
    alpha.push_back(m.alpha);
    lambda.push_back(m.lambda);
  }
  return {{"alpha", alpha}, {"lambda", lambda}};
}

BaselinePtr side_baseline(const SampleSide& side) {
  if (const auto* mo = std::get_if<MultipleOutlierSpec>(&side)) return mo->baseline;
  return std::get<DependentSampleSpec>(side).marginals.front().baseline;
}

GeneratorPtr side_generator(const SampleSide& side) {
  if (const auto* dep = std::get_if<DependentSampleSpec>(&side)) return dep->generator;
  return nullptr;
}

// ---------------------------------------------------------------------------
// formatting

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

bool wants_hazard(const Scenario& s) {
  const auto orders = requested_orders(s);
  return std::find(orders.begin(), orders.end(), StochasticOrder::hr) != orders.end();
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream is(line);
  while (std::getline(is, cell, sep)) out.push_back(cell);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

std::string report_path_name(const fs::path& p) { return p.string(); }

struct WrittenFiles {
  fs::path csv;
  fs::path svg;
  fs::path report;
};

fs::path output_path(const fs::path& dir, const std::string& configured, const std::string& fallback) {
  if (configured.empty()) return dir / fallback;
  fs::path p(configured);
  return p.is_absolute() ? p : dir / p;
}

int run_and_write(const ScenarioFile& file, const GlobalOptions& options, std::ostream& out, std::ostream& err) {
  ComparisonResult result;
  try {
    result = run_comparison(file.scenario);
  } catch (const std::exception& e) {
    err << "error: evaluation failed: " << e.what() << "\n";
    return kExitParse;
  }
  const int code = comparison_exit_code(result);
  const std::string csv = render_curves_csv(file.scenario);
  const std::string report = render_report(file, result, code);

  const fs::path dir = resolve_out_dir(options);
  const WrittenFiles files{output_path(dir, file.outputs.csv, file.name + ".csv"),
                           output_path(dir, file.outputs.svg, file.name + ".svg"),
                           output_path(dir, file.outputs.report, file.name + ".txt")};
  try {
    write_file_atomic(files.csv, csv);
    write_file_atomic(files.svg, render_svg(csv));
    write_file_atomic(files.report, report);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  }
  out << report;
  out << "wrote " << report_path_name(files.csv) << ", " << report_path_name(files.svg) << ", "
      << report_path_name(files.report) << "\n";
  return code;
}

const char* plot_color(const std::string& column) { return column.find("_X") != std::string::npos ? "#1f77b4" : "#d62728"; }

}  // namespace

// ---------------------------------------------------------------------------

ScenarioFile parse_scenario_json(const std::string& text, const std::string& name) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    const auto [line, col] = line_and_column(text, e.byte);
    throw ScenarioParseError("line " + std::to_string(line) + ", column " + std::to_string(col) +
                             ": malformed JSON (" + e.what() + ")");
  }
  reject_unknown_keys(doc, "", {"name", "description", "baseline", "generator", "x_side", "y_side", "n1_pmf",
                                "n2_pmf", "grid", "theorem", "orders", "output"});

  ScenarioFile file;
  file.name = doc.contains("name") ? string_at(doc.at("name"), "/name") : name;
  if (doc.contains("description")) string_at(doc.at("description"), "/description");

  const BaselinePtr baseline = parse_baseline(require_key(doc, "", "baseline"));
  const GeneratorPtr generator = doc.contains("generator") ? parse_generator(doc.at("generator"))
                                                           : independence_generator();
  file.scenario.x_side = parse_side(require_key(doc, "", "x_side"), "/x_side", baseline, generator);
  file.scenario.y_side = parse_side(require_key(doc, "", "y_side"), "/y_side", baseline, generator);

  for (const char* key : {"n1_pmf", "n2_pmf"}) {
    if (!doc.contains(key)) continue;
    const std::string p = std::string("/") + key;
    const auto pmf = number_list(doc.at(key), p);
    auto law = rethrow_as_parse_error(p, [&] { return SampleSizeLaw(pmf); });
    const SampleSide& side = key[1] == '1' ? file.scenario.x_side : file.scenario.y_side;
    const auto* dep = std::get_if<DependentSampleSpec>(&side);
    if (!dep) fail_at(p, "sample-size laws apply only to MPHR sample sides");
    if (law.max_size() > static_cast<int>(dep->size())) fail_at(p, "support exceeds the sample size");
    (key[1] == '1' ? file.scenario.n1 : file.scenario.n2) = law;
  }

  if (doc.contains("grid")) file.scenario.grid = parse_grid(doc.at("grid"));
  if (doc.contains("theorem")) {
    const std::string tag = string_at(doc.at("theorem"), "/theorem");
    const auto parsed = parse_theorem_tag(tag);
    if (!parsed) fail_at("/theorem", "unknown theorem tag '" + tag + "'");
    file.scenario.theorem = *parsed;
  }
  if (doc.contains("orders")) {
    const json& orders = doc.at("orders");
    if (!orders.is_array()) fail_at("/orders", "expected an array");
    for (std::size_t i = 0; i < orders.size(); ++i) {
      const std::string p = "/orders/" + std::to_string(i);
      const std::string o = string_at(orders[i], p);
      if (o == "st") file.scenario.orders.push_back(StochasticOrder::st);
      else if (o == "hr") file.scenario.orders.push_back(StochasticOrder::hr);
      else if (o == "rh") file.scenario.orders.push_back(StochasticOrder::rh);
      else fail_at(p, "unknown order '" + o + "'");
    }
  }
  if (doc.contains("output")) {
    const json& o = doc.at("output");
    reject_unknown_keys(o, "/output", {"csv", "svg", "report"});
    if (o.contains("csv")) file.outputs.csv = string_at(o.at("csv"), "/output/csv");
    if (o.contains("svg")) file.outputs.svg = string_at(o.at("svg"), "/output/svg");
    if (o.contains("report")) file.outputs.report = string_at(o.at("report"), "/output/report");
  }
  return file;
}

ScenarioFile load_scenario_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read scenario file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario_json(buf.str(), path.stem().string());
}

std::string scenario_to_json(const ScenarioFile& file) {
  const Scenario& s = file.scenario;
  json doc;
  doc["name"] = file.name;
  const BaselinePtr b = side_baseline(s.x_side);
  const auto bp = b->parameters();
  if (b->family() == "weibull") {
    doc["baseline"] = {{"family", "weibull"}, {"a", bp.at(0)}, {"b", bp.at(1)}};
  } else {
    doc["baseline"] = {{"family", b->family()}, {"rate", bp.at(0)}};
  }
  if (const GeneratorPtr g = side_generator(s.x_side); g && g->name() != "independence") {
    doc["generator"] = {{"name", g->name()}, {"params", g->params()}};
  }
  doc["x_side"] = side_to_json(s.x_side);
  doc["y_side"] = side_to_json(s.y_side);
  if (s.n1) doc["n1_pmf"] = s.n1->pmf();
  if (s.n2) doc["n2_pmf"] = s.n2->pmf();
  const GridShape shape = grid_shape(s.grid);
  doc["grid"] = {{"u_min", shape.u_min}, {"u_max", shape.u_max}, {"points", shape.points}};
  doc["theorem"] = to_string(s.theorem);
  if (!s.orders.empty()) {
    json orders = json::array();
    for (auto o : s.orders) orders.push_back(to_string(o));
    doc["orders"] = orders;
  }
  return doc.dump(2) + "\n";
}

ScenarioFile builtin_example(int id) {
  const SampleSizeLaw n1({0.05, 0.2, 0.3, 0.45});
  const SampleSizeLaw n2({0.05, 0.2, 0.35, 0.4});
  auto dependent = [](const std::vector<double>& alpha, const std::vector<double>& lambda, const BaselinePtr& b,
                      const GeneratorPtr& g) {
    DependentSampleSpec s;
    s.generator = g;
    for (std::size_t i = 0; i < alpha.size(); ++i) s.marginals.push_back({alpha[i], lambda[i], b});
    return s;
  };

  ScenarioFile f;
  f.name = "example" + std::to_string(id);
  switch (id) {
    case 1: {
      const auto b = make_weibull(1.2, 0.5);
      const auto g = builtin_generator("example1", {0.1});
      const std::vector<double> a(4, 0.8);
      f.scenario.x_side = dependent(a, {0.2, 0.4, 0.8, 1.3}, b, g);
      f.scenario.y_side = dependent(a, {0.3, 0.3, 1.5, 1.6}, b, g);
      f.scenario.n1 = n1;
      f.scenario.n2 = n2;
      f.scenario.theorem = TheoremTag::thm1;
      break;
    }
    case 2: {
      const auto b = make_weibull(0.5, 0.8);
      const auto g = builtin_generator("example2", {7.0});
      const std::vector<double> l(4, 0.4);
      f.scenario.x_side = dependent({1.0 / 3, 1.0 / 3, 1.0 / 5, 1.0 / 8}, l, b, g);
      f.scenario.y_side = dependent({1.0 / 5, 1.0 / 6, 1.0 / 7, 1.0 / 9}, l, b, g);
      f.scenario.n1 = n1;
      f.scenario.n2 = n2;
      f.scenario.theorem = TheoremTag::thm2;
      break;
    }
    case 3: {
      const auto b = make_weibull(0.15, 1.2);
      const auto g = independence_generator();
      const std::vector<double> l(4, 0.5);
      f.scenario.x_side = dependent({0.25, 1.0 / 3, 0.5, 1.0}, l, b, g);
      f.scenario.y_side = dependent({1.0 / 3, 1.0 / 3, 0.5, 0.5}, l, b, g);
      f.scenario.theorem = TheoremTag::thm3;
      break;
    }
    case 4: {
      const auto b = make_weibull(1.5, 0.2);
      const MultipleOutlierSpec x{0.05, 0.1, 0.3, 3, 4, b};
      const MultipleOutlierSpec y{0.05, 0.1, 0.3, 1, 8, b};
      f.scenario.x_side = x;
      f.scenario.y_side = y;
      f.scenario.theorem = TheoremTag::thm5;
      break;
    }
    default:
      throw std::out_of_range("example id must be 1, 2, 3 or 4");
  }
  return f;
}

fs::path resolve_out_dir(const GlobalOptions& options) {
  if (options.out_dir) return *options.out_dir;
  if (const char* env = std::getenv("ORDSTAT_OUT"); env && *env) return env;
  return "ordstat_out";
}

void apply_grid_overrides(Scenario& scenario, const GlobalOptions& options) {
  if (!options.grid_points && !options.u_min) return;
  const GridShape shape = grid_shape(scenario.grid);
  scenario.grid = Grid::uniform(options.u_min.value_or(shape.u_min), shape.u_max,
                                options.grid_points.value_or(shape.points));
}

std::string render_curves_csv(const Scenario& s) {
  const bool hazards = wants_hazard(s);
  std::string out = "u,x,sf_X,sf_Y,hr_X,hr_Y,source\n";
  for (std::size_t k = 0; k < s.grid.size(); ++k) {
    const double u = s.grid.u()[k];
    const double x = s.grid.x()[k];
    out += fmt17(u) + "," + fmt17(x) + "," + fmt17(side_sf(s.x_side, s.n1, x)) + "," +
           fmt17(side_sf(s.y_side, s.n2, x)) + ",";
    if (hazards) out += fmt17(side_hazard(s.x_side, s.n1, x)) + "," + fmt17(side_hazard(s.y_side, s.n2, x));
    else out += ",";
    out += ",analytic\n";
  }
  return out;
}

std::string render_svg(const std::string& csv_text) {
  // columns: u,x,sf_X,sf_Y,hr_X,hr_Y,source
  struct Series {
    std::vector<std::pair<double, double>> points;
  };
  std::map<std::string, Series> sf;  // key "<column> <source>"
  std::map<std::string, Series> hr;
  std::istringstream in(csv_text);
  std::string line;
  std::getline(in, line);
  const std::vector<std::string> names{"", "", "sf_X", "sf_Y", "hr_X", "hr_Y"};
  double hr_max = 0.0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split(line, ',');
    if (cells.size() < 7) continue;
    const double u = std::strtod(cells[0].c_str(), nullptr);
    for (int c = 2; c <= 5; ++c) {
      if (cells[c].empty()) continue;
      const double v = std::strtod(cells[c].c_str(), nullptr);
      if (!std::isfinite(v)) continue;
      auto& target = c <= 3 ? sf : hr;
      target[names[c] + " " + cells[6]].points.emplace_back(u, v);
      if (c >= 4) hr_max = std::max(hr_max, v);
    }
  }

  const double width = 640.0;
  const double panel_h = 300.0;
  const double left = 60.0;
  const double right = 20.0;
  const double top = 30.0;
  const double gap = 50.0;
  const bool has_hr = !hr.empty();
  const double height = top + panel_h + (has_hr ? gap + panel_h : 0.0) + 40.0;
  const double plot_w = width - left - right;

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  auto panel = [&](const std::map<std::string, Series>& series, double y0, double y_max, const char* label) {
    svg << "<rect x=\"" << left << "\" y=\"" << y0 << "\" width=\"" << plot_w << "\" height=\"" << panel_h
        << "\" fill=\"none\" stroke=\"#444\"/>\n";
    svg << "<text x=\"" << left << "\" y=\"" << y0 - 8 << "\" font-family=\"sans-serif\" font-size=\"13\">" << label
        << " against u (x = -ln u)</text>\n";
    for (int t = 0; t <= 4; ++t) {
      const double frac = t / 4.0;
      const double gx = left + frac * plot_w;
      const double gy = y0 + panel_h - frac * panel_h;
      svg << "<text x=\"" << gx << "\" y=\"" << y0 + panel_h + 14 << "\" font-family=\"sans-serif\" font-size=\"10\" "
          << "text-anchor=\"middle\">" << fmt6(frac) << "</text>\n";
      svg << "<text x=\"" << left - 4 << "\" y=\"" << gy + 3 << "\" font-family=\"sans-serif\" font-size=\"10\" "
          << "text-anchor=\"end\">" << fmt6(frac * y_max) << "</text>\n";
    }
    int legend = 0;
    for (const auto& [key, s] : series) {
      const std::string column = key.substr(0, key.find(' '));
      const bool dashed = key.find(" analytic") == std::string::npos;
      svg << "<polyline fill=\"none\" stroke=\"" << plot_color(column) << "\" stroke-width=\"1.5\""
          << (dashed ? " stroke-dasharray=\"5,3\"" : "") << " points=\"";
      for (const auto& [u, v] : s.points) {
        const double px = left + u * plot_w;
        const double py = y0 + panel_h - (y_max > 0.0 ? std::min(v / y_max, 1.0) : 0.0) * panel_h;
        svg << fmt6(px) << "," << fmt6(py) << " ";
      }
      svg << "\"/>\n";
      svg << "<text x=\"" << left + plot_w - 150 << "\" y=\"" << y0 + 16 + 14 * legend++
          << "\" font-family=\"sans-serif\" font-size=\"11\" fill=\"" << plot_color(column) << "\">" << key
          << "</text>\n";
    }
  };

  panel(sf, top, 1.0, "Survival of the second-order statistic");
  if (has_hr) panel(hr, top + panel_h + gap, hr_max > 0.0 ? hr_max : 1.0, "Hazard rate of the second-order statistic");
  svg << "</svg>\n";
  return svg.str();
}

std::string render_report(const ScenarioFile& file, const ComparisonResult& result, int exit_code) {
  std::ostringstream os;
  const GridShape g = grid_shape(file.scenario.grid);
  os << "scenario: " << file.name << "\n";
  os << "theorem: " << to_string(file.scenario.theorem) << "\n";
  os << "grid: " << g.points << " points, u in [" << fmt6(g.u_min) << ", " << fmt6(g.u_max) << "], x = -ln u\n";
  if (file.scenario.theorem != TheoremTag::none) {
    os << "hypotheses: " << (result.hypotheses.passed() ? "PASS" : "FAIL") << "\n";
    for (const auto& c : result.hypotheses.checks) {
      const char* tag = c.passed ? "PASS" : (c.gating ? "FAIL" : "WARN");
      os << "  [" << tag << "] " << c.name << (c.gating ? "" : " (non-gating)") << ": " << c.detail << "\n";
    }
  }
  os << "dominance:\n";
  for (const auto& d : result.dominance) {
    os << "  " << to_string(d.order) << ": " << (d.holds ? "HOLDS" : "FAILS") << ", min margin "
       << fmt6(d.min_margin) << " at x = " << fmt6(d.witness_x) << " over " << d.points_checked << " points\n";
    if (d.order == StochasticOrder::hr) {
      os << "    hazard comparison " << (d.hazard_check_holds ? "holds" : "fails") << "; survival ratio "
         << (d.ratio_monotone ? "non-decreasing" : "decreases") << " (worst step " << fmt6(d.ratio_min_step)
         << " at x = " << fmt6(d.ratio_witness_x) << ")"
         << (d.numerically_unstable ? "; ROUTES DISAGREE (numerically unstable)" : "") << "\n";
    }
  }
  os << "exit code: " << exit_code << "\n";
  return os.str();
}

void write_file_atomic(const fs::path& path, const std::string& content) {
  std::error_code ec;
  if (path.has_parent_path()) {
    fs::create_directories(path.parent_path(), ec);
    if (ec) throw std::runtime_error("cannot create directory " + path.parent_path().string() + ": " + ec.message());
  }
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp);
    throw std::runtime_error("cannot rename into " + path.string() + ": " + ec.message());
  }
}

int comparison_exit_code(const ComparisonResult& result) {
  if (!result.dominance_holds()) return kExitDominance;
  if (!result.hypotheses.passed()) return kExitHypothesis;
  return kExitOk;
}

int cmd_reproduce(int example_id, const GlobalOptions& options, std::ostream& out, std::ostream& err) {
  ScenarioFile file;
  try {
    file = builtin_example(example_id);
    apply_grid_overrides(file.scenario, options);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitParse;
  }
  return run_and_write(file, options, out, err);
}

int cmd_compare(const std::string& scenario_path, const GlobalOptions& options, std::ostream& out,
                std::ostream& err) {
  ScenarioFile file;
  try {
    file = load_scenario_file(scenario_path);
    apply_grid_overrides(file.scenario, options);
  } catch (const ScenarioParseError& e) {
    err << scenario_path << ": " << e.what() << "\n";
    return kExitParse;
  } catch (const std::invalid_argument& e) {
    err << scenario_path << ": " << e.what() << "\n";
    return kExitParse;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  }
  return run_and_write(file, options, out, err);
}

int cmd_oracle_check(int n, int trials, std::uint64_t seed, const std::vector<std::string>& generators,
                     std::ostream& out, std::ostream& err) {
  if (n < 2 || n > 10) {
    err << "error: --n must lie in 2..10\n";
    return kExitParse;
  }
  OracleSuiteConfig config;
  config.n_min = config.n_max = n;
  config.trials = trials;
  config.seed = seed;
  if (!generators.empty()) config.generators = generators;
  OracleSuiteResult r;
  try {
    r = run_oracle_suite(config);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitParse;
  }
  out << "oracle identity: " << r.evaluations << " evaluations, n = " << n << ", seed = " << seed << "\n";
  out << "max deviation: " << fmt17(r.max_deviation) << " (" << r.worst_case << ")\n";
  const bool pass = r.max_deviation <= 1e-10;
  out << (pass ? "PASS" : "FAIL") << " (threshold 1e-10)\n";
  return pass ? kExitOk : kExitDominance;
}

int cmd_simulate(const std::string& scenario_path, std::size_t replications, std::uint64_t seed,
                 const GlobalOptions& options, std::ostream& out, std::ostream& err) {
  ScenarioFile file;
  try {
    file = load_scenario_file(scenario_path);
    apply_grid_overrides(file.scenario, options);
  } catch (const ScenarioParseError& e) {
    err << scenario_path << ": " << e.what() << "\n";
    return kExitParse;
  } catch (const std::invalid_argument& e) {
    err << scenario_path << ": " << e.what() << "\n";
    return kExitParse;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  }
  const Scenario& s = file.scenario;
  if (s.n1 || s.n2) {
    err << scenario_path << ": simulation supports fixed sample sizes only\n";
    return kExitParse;
  }
  auto independent_marginals = [](const SampleSide& side) -> std::optional<std::vector<MphrMarginal>> {
    if (const auto* mo = std::get_if<MultipleOutlierSpec>(&side)) return mo->marginals();
    const auto& dep = std::get<DependentSampleSpec>(side);
    if (dep.generator->name() != "independence") return std::nullopt;
    return dep.marginals;
  };
  const auto mx = independent_marginals(s.x_side);
  const auto my = independent_marginals(s.y_side);
  if (!mx || !my) {
    err << scenario_path << ": simulation supports independent observations only\n";
    return kExitParse;
  }

  McReport rx;
  McReport ry;
  try {
    SimConfig cx{replications, seed, *mx, s.grid};
    SimConfig cy{replications, seed ^ 0x5851f42d4c957f2dULL, *my, s.grid};
    rx = mc_vs_analytic_report(cx, [&s](double x) { return side_sf(s.x_side, std::nullopt, x); });
    ry = mc_vs_analytic_report(cy, [&s](double x) { return side_sf(s.y_side, std::nullopt, x); });
    ry.seed = cy.seed;
  } catch (const std::exception& e) {
    err << "error: simulation failed: " << e.what() << "\n";
    return kExitParse;
  }

  std::string csv = "u,x,sf_X,sf_Y,hr_X,hr_Y,source\n";
  for (const char* source : {"analytic", "mc"}) {
    const bool mc = source[0] == 'm';
    for (std::size_t k = 0; k < s.grid.size(); ++k) {
      csv += fmt17(s.grid.u()[k]) + "," + fmt17(s.grid.x()[k]) + "," +
             fmt17(mc ? rx.empirical[k] : rx.analytic[k]) + "," + fmt17(mc ? ry.empirical[k] : ry.analytic[k]) +
             ",,," + source + "\n";
    }
  }
  std::ostringstream rep;
  rep << "scenario: " << file.name << "\n";
  rep << "generator: " << rx.algorithm << ", seed " << seed << ", " << replications << " replications per side\n";
  rep << "X side: max standardized deviation " << fmt6(rx.max_standardized_deviation) << " at x = "
      << fmt6(rx.witness_x) << (rx.pass ? " PASS" : " FAIL") << "\n";
  rep << "Y side: max standardized deviation " << fmt6(ry.max_standardized_deviation) << " at x = "
      << fmt6(ry.witness_x) << (ry.pass ? " PASS" : " FAIL") << "\n";
  const int code = (rx.pass && ry.pass) ? kExitOk : kExitDominance;
  rep << "exit code: " << code << "\n";

  const fs::path dir = resolve_out_dir(options);
  try {
    write_file_atomic(dir / (file.name + "_mc.csv"), csv);
    write_file_atomic(dir / (file.name + "_mc.svg"), render_svg(csv));
    write_file_atomic(dir / (file.name + "_mc.txt"), rep.str());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  }
  out << rep.str();
  return code;
}

int cmd_plot(const std::string& csv_path, const GlobalOptions& options, std::ostream& out, std::ostream& err) {
  std::ifstream in(csv_path, std::ios::binary);
  if (!in) {
    err << "error: cannot read " << csv_path << "\n";
    return kExitIo;
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  if (text.rfind("u,x,sf_X,sf_Y,hr_X,hr_Y,source", 0) != 0) {
    err << csv_path << ": line 1: not a curves CSV (unexpected header)\n";
    return kExitParse;
  }
  const fs::path target = resolve_out_dir(options) / (fs::path(csv_path).stem().string() + ".svg");
  try {
    write_file_atomic(target, render_svg(text));
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  }
  out << "wrote " << target.string() << "\n";
  return kExitOk;
}

int cmd_export_example(int example_id, const GlobalOptions& options, std::ostream& out, std::ostream& err) {
  ScenarioFile file;
  try {
    file = builtin_example(example_id);
    apply_grid_overrides(file.scenario, options);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitParse;
  }
  if (!options.out_dir) {
    out << scenario_to_json(file);
    return kExitOk;
  }
  const fs::path target = fs::path(*options.out_dir) / (file.name + ".json");
  try {
    write_file_atomic(target, scenario_to_json(file));
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  }
  out << "wrote " << target.string() << "\n";
  return kExitOk;
}

}  // namespace ordstat::cli
