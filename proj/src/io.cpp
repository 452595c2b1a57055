#include "agriopt/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "agriopt/csv.hpp"
#include "agriopt/hash.hpp"

namespace agriopt {

using nlohmann::json;

std::string_view to_string(ModelKind k) {
  switch (k) {
    case ModelKind::lkw: return "lkw";
    case ModelKind::nleb: return "nleb";
    case ModelKind::esca: return "esca";
  }
  return "?";
}

ModelKind parse_model_kind(std::string_view s) {
  if (s == "lkw") return ModelKind::lkw;
  if (s == "nleb") return ModelKind::nleb;
  if (s == "esca") return ModelKind::esca;
  throw std::invalid_argument("unknown model kind '" + std::string(s) + "' (expected lkw, nleb or esca)");
}

std::string Diagnostic::to_string() const {
  std::string out = file;
  if (line) out += ":" + std::to_string(line);
  if (line && column) out += ":" + std::to_string(column);
  out += severity == Severity::error ? ": error: " : ": warning: ";
  out += message;
  return out;
}

bool ValidationReport::ok() const { return error_count() == 0; }

std::size_t ValidationReport::error_count() const {
  return static_cast<std::size_t>(std::count_if(diagnostics.begin(), diagnostics.end(),
                                                [](const Diagnostic& d) { return d.severity == Severity::error; }));
}

std::size_t ValidationReport::warning_count() const { return diagnostics.size() - error_count(); }

namespace {

std::string join_errors(const std::vector<Diagnostic>& diags) {
  std::string out;
  for (const auto& d : diags)
    if (d.severity == Severity::error) {
      if (!out.empty()) out += "\n";
      out += d.to_string();
    }
  return out.empty() ? "dataset error" : out;
}

}  // namespace

DatasetError::DatasetError(std::vector<Diagnostic> diags)
    : std::runtime_error(join_errors(diags)), diags_(std::move(diags)) {}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& p, const std::string& content) {
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  out << content;
  if (!out) throw std::runtime_error("write failed for " + p.string());
}

namespace {

// ---------------------------------------------------------------- helpers

struct Diags {
  std::vector<Diagnostic>& out;
  std::string file;

  void error(std::size_t line, std::size_t col, std::string msg) {
    out.push_back({file, line, col, Severity::error, std::move(msg)});
  }
  void warn(std::size_t line, std::size_t col, std::string msg) {
    out.push_back({file, line, col, Severity::warning, std::move(msg)});
  }
};

bool has_errors(const std::vector<Diagnostic>& d, std::size_t from = 0) {
  return std::any_of(d.begin() + static_cast<std::ptrdiff_t>(from), d.end(),
                     [](const Diagnostic& x) { return x.severity == Severity::error; });
}

struct HeaderCell {
  std::string name;
  std::optional<std::string> unit;
};

HeaderCell split_header(std::string_view raw) {
  raw = trim(raw);
  HeaderCell h;
  const auto open = raw.find('[');
  if (open != std::string_view::npos && raw.back() == ']') {
    h.name = std::string(trim(raw.substr(0, open)));
    h.unit = std::string(trim(raw.substr(open + 1, raw.size() - open - 2)));
  } else {
    h.name = std::string(raw);
  }
  return h;
}

std::string normalize_unit(std::string u) {
  std::string out;
  for (std::size_t i = 0; i < u.size(); ++i) {
    // Accept the superscript cube as written in many source tables.
    if (u.compare(i, 2, "\xC2\xB3") == 0) {
      out += '3';
      ++i;
      continue;
    }
    if (u[i] != ' ') out += static_cast<char>(std::tolower(static_cast<unsigned char>(u[i])));
  }
  if (out == "h/ha") out = "hr/ha";
  return out;
}

bool unit_matches(const std::string& given, const std::string& expected, const std::string& currency) {
  const std::string g = normalize_unit(given);
  auto with = [&](const std::string& cur) {
    std::string e = expected;
    if (auto pos = e.find("{cur}"); pos != std::string::npos) e.replace(pos, 5, cur);
    return normalize_unit(e) == g;
  };
  if (expected.find("{cur}") == std::string::npos) return with("");
  if (currency.empty()) return with("currency") || with("EUR") || with("CAD") || with("\xE2\x82\xAC");
  // A column priced in another currency than the bundle's is an error.
  return with("currency") || with(currency) || (currency == "EUR" && with("\xE2\x82\xAC"));
}

bool is_missing(std::string_view cell) {
  cell = trim(cell);
  return cell.empty() || cell == "-";
}

std::size_t line_of_byte(const std::string& text, std::size_t byte) {
  byte = std::min(byte, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(byte), '\n'));
}

std::optional<json> parse_json_text(const std::string& text, Diags& d) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    d.error(line_of_byte(text, e.byte == 0 ? 0 : e.byte - 1), 0, std::string("invalid JSON: ") + e.what());
  }
  return std::nullopt;
}

// ---------------------------------------------------------------- crops.csv

enum class Cell { text, number, optional_number };

struct ColumnSpec {
  std::string_view name;
  Cell cell;
  bool required;
  std::string_view unit;  // "{cur}" stands for the bundle currency
};

constexpr ColumnSpec kCropColumns[] = {
    {"id", Cell::text, true, ""},
    {"name", Cell::text, true, ""},
    {"net_profit", Cell::optional_number, false, "{cur}/ha"},
    {"water_req", Cell::number, true, "m3/ha"},
    {"fert_N", Cell::number, true, "kg/ha"},
    {"fert_P2O5", Cell::number, true, "kg/ha"},
    {"fert_K2O", Cell::number, true, "kg/ha"},
    {"labour_req", Cell::number, true, "hr/ha"},
    {"yield", Cell::optional_number, false, "kg/ha"},
    {"price", Cell::optional_number, false, "{cur}/kg"},
    {"prod_cost", Cell::optional_number, false, "{cur}/ha"},
    {"p_export", Cell::number, true, "kg/ha"},
    {"n_export", Cell::number, true, "kg/ha"},
    {"min_area", Cell::optional_number, false, "ha"},
    {"min_observed_area", Cell::optional_number, false, "ha"},
    {"baseline_area", Cell::number, true, "ha"},
};

/// Maps header cells to column specs. Returns false on a fatal header error.
template <std::size_t N>
bool map_header(const std::vector<std::string>& header, const ColumnSpec (&specs)[N], const std::string& currency,
                Diags& d, std::array<std::optional<std::size_t>, N>& where) {
  bool ok = true;
  for (std::size_t c = 0; c < header.size(); ++c) {
    const auto h = split_header(header[c]);
    std::size_t k = 0;
    while (k < N && specs[k].name != h.name) ++k;
    if (k == N) {
      d.warn(1, c + 1, "unknown column '" + h.name + "' ignored");
      continue;
    }
    if (where[k]) {
      d.error(1, c + 1, "duplicate column '" + h.name + "'");
      ok = false;
      continue;
    }
    where[k] = c;
    if (h.unit && !specs[k].unit.empty() && !unit_matches(*h.unit, std::string(specs[k].unit), currency)) {
      std::string expected(specs[k].unit);
      if (auto pos = expected.find("{cur}"); pos != std::string::npos)
        expected.replace(pos, 5, currency.empty() ? "currency" : currency);
      d.error(1, c + 1, "unit mismatch in column " + h.name + ": got '" + *h.unit + "', expected '" + expected + "'");
      ok = false;
    }
  }
  for (std::size_t k = 0; k < N; ++k)
    if (specs[k].required && !where[k]) {
      d.error(1, 0, "missing column '" + std::string(specs[k].name) + "'");
      ok = false;
    }
  return ok;
}

// Reads a numeric cell: nullopt for an empty optional, error on garbage or a
// negative value.
std::optional<double> numeric_cell(const std::vector<std::string>& row, std::size_t col, std::string_view name,
                                   bool optional, std::size_t line, Diags& d, bool& bad) {
  const std::string& cell = row[col];
  if (is_missing(cell)) {
    if (optional) return std::nullopt;
    d.warn(line, col + 1, "missing value for " + std::string(name) + ", using 0");
    return 0.0;
  }
  auto v = parse_number(cell);
  if (!v) {
    d.error(line, col + 1, "not a number in column " + std::string(name) + ": '" + cell + "'");
    bad = true;
    return std::nullopt;
  }
  if (*v < 0.0) {
    d.error(line, col + 1, "negative value " + format_sig(*v) + " in column " + std::string(name));
    bad = true;
  }
  return v;
}

}  // namespace

std::vector<CropRecord> parse_crops_csv(const std::string& text, const std::string& file, const std::string& currency,
                                        std::vector<Diagnostic>& diags, std::vector<std::size_t>* row_lines) {
  Diags d{diags, file};
  CsvTable t;
  try {
    t = parse_csv(text);
  } catch (const std::exception& e) {
    d.error(0, 0, e.what());
    return {};
  }
  constexpr std::size_t N = std::size(kCropColumns);
  std::array<std::optional<std::size_t>, N> where{};
  if (t.header.empty()) {
    d.error(1, 0, "empty file");
    return {};
  }
  if (!map_header(t.header, kCropColumns, currency, d, where)) return {};

  std::vector<CropRecord> crops;
  std::set<std::string> ids;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const auto& row = t.rows[r];
    const std::size_t line = t.lines[r];
    if (row.size() != t.header.size()) {
      d.error(line, 0, "expected " + std::to_string(t.header.size()) + " fields, got " + std::to_string(row.size()));
      continue;
    }
    bool bad = false;
    CropRecord c;
    auto num = [&](std::size_t k) -> std::optional<double> {
      if (!where[k]) return std::nullopt;
      return numeric_cell(row, *where[k], kCropColumns[k].name, kCropColumns[k].cell == Cell::optional_number, line, d,
                          bad);
    };
    c.id = std::string(trim(row[*where[0]]));
    c.name = std::string(trim(row[*where[1]]));
    if (c.id.empty()) {
      d.error(line, *where[0] + 1, "empty crop id");
      bad = true;
    } else if (!ids.insert(c.id).second) {
      d.error(line, *where[0] + 1, "duplicate crop id '" + c.id + "'");
      bad = true;
    }
    c.net_profit = num(2);
    c.water_req = num(3).value_or(0.0);
    for (std::size_t k = 0; k < 3; ++k) c.fertilizer_req[k] = num(4 + k).value_or(0.0);
    c.labour_req = num(7).value_or(0.0);
    c.yield = num(8);
    c.price = num(9);
    c.prod_cost = num(10);
    c.p_export = num(11).value_or(0.0);
    c.n_export = num(12).value_or(0.0);
    c.min_area = num(13);
    c.min_observed_area = num(14);
    c.baseline_area = num(15).value_or(0.0);
    if (!bad)
      for (auto& m : validate_crop(c)) d.error(line, 0, m);
    crops.push_back(std::move(c));
    if (row_lines) row_lines->push_back(line);
  }
  if (t.rows.empty()) d.error(0, 0, "no crop rows");
  return crops;
}

namespace {

std::optional<double> json_number(const json& obj, const std::string& key, Diags& d, bool& present) {
  present = obj.contains(key);
  if (!present || obj[key].is_null()) return std::nullopt;
  if (!obj[key].is_number()) {
    d.error(0, 0, "field " + key + " must be a number");
    return std::nullopt;
  }
  const double v = obj[key].get<double>();
  if (!std::isfinite(v) || v < 0.0) {
    d.error(0, 0, "field " + key + " must be finite and >= 0, got " + format_sig(v));
    return std::nullopt;
  }
  return v;
}

std::optional<double> json_number(const json& obj, const std::string& key, Diags& d) {
  bool present = false;
  return json_number(obj, key, d, present);
}

void check_json_units(const json& j, const std::map<std::string, std::string>& expected, const std::string& currency,
                      Diags& d) {
  if (!j.contains("units")) return;
  if (!j["units"].is_object()) {
    d.error(0, 0, "units must be an object");
    return;
  }
  for (const auto& [key, val] : j["units"].items()) {
    auto it = expected.find(key);
    if (it == expected.end()) {
      d.warn(0, 0, "unit given for unknown field " + key);
      continue;
    }
    if (!val.is_string() || !unit_matches(val.get<std::string>(), it->second, currency))
      d.error(0, 0, "unit mismatch for " + key + ": got " + val.dump() + ", expected '" + it->second + "'");
  }
}

}  // namespace

RegionTotals parse_totals_json(const std::string& text, const std::string& file, std::vector<Diagnostic>& diags) {
  Diags d{diags, file};
  RegionTotals t;
  auto parsed = parse_json_text(text, d);
  if (!parsed) return t;
  const json& j = *parsed;
  if (!j.is_object()) {
    d.error(1, 0, "expected a JSON object");
    return t;
  }
  static const std::set<std::string> known{"currency",       "total_area", "total_water",
                                           "total_fertilizer", "fertilizer", "total_labour",
                                           "p_cap",          "n_cap",      "production_min_fraction",
                                           "production_max_fraction", "production_bounds", "units"};
  for (const auto& [key, val] : j.items())
    if (!known.count(key)) d.warn(0, 0, "unknown field '" + key + "' ignored");

  if (j.contains("currency")) {
    if (j["currency"].is_string())
      t.currency = j["currency"].get<std::string>();
    else
      d.error(0, 0, "currency must be a string");
  }
  check_json_units(j,
                   {{"total_area", "ha"},
                    {"total_water", "m3"},
                    {"total_fertilizer", "kg"},
                    {"fertilizer", "kg"},
                    {"total_labour", "hr"},
                    {"p_cap", "kg"},
                    {"n_cap", "kg"},
                    {"production_bounds", "kg"}},
                   t.currency, d);
  t.total_area = json_number(j, "total_area", d);
  t.total_water = json_number(j, "total_water", d);
  t.total_fertilizer = json_number(j, "total_fertilizer", d);
  t.total_labour = json_number(j, "total_labour", d);
  t.p_cap = json_number(j, "p_cap", d);
  t.n_cap = json_number(j, "n_cap", d);
  if (j.contains("fertilizer")) {
    if (!j["fertilizer"].is_object()) {
      d.error(0, 0, "fertilizer must be an object keyed by N, P2O5, K2O");
    } else {
      for (const auto& [key, val] : j["fertilizer"].items())
        if (std::find(kFertilizerNames.begin(), kFertilizerNames.end(), key) == kFertilizerNames.end())
          d.error(0, 0, "unknown fertilizer kind '" + key + "'");
      for (std::size_t k = 0; k < 3; ++k)
        t.fertilizer_by_kind[k] = json_number(j["fertilizer"], std::string(kFertilizerNames[k]), d);
    }
  }
  if (auto v = json_number(j, "production_min_fraction", d)) t.production_min_fraction = *v;
  if (auto v = json_number(j, "production_max_fraction", d)) t.production_max_fraction = *v;
  if (j.contains("production_bounds")) {
    if (!j["production_bounds"].is_object()) {
      d.error(0, 0, "production_bounds must be an object");
    } else {
      for (const auto& [key, val] : j["production_bounds"].items()) {
        if (!val.is_array() || val.size() != 2 || !val[0].is_number() || !val[1].is_number()) {
          d.error(0, 0, "production_bounds." + key + " must be [min, max]");
          continue;
        }
        t.production_bounds[key] = {val[0].get<double>(), val[1].get<double>()};
      }
    }
  }
  for (auto& m : validate_totals(t)) d.error(0, 0, m);
  return t;
}

std::vector<SubWatershed> parse_subwatersheds_csv(const std::string& text, const std::string& file,
                                                  const std::vector<CropRecord>& crops,
                                                  std::vector<Diagnostic>& diags) {
  Diags d{diags, file};
  CsvTable t;
  try {
    t = parse_csv(text);
  } catch (const std::exception& e) {
    d.error(0, 0, e.what());
    return {};
  }
  if (t.header.empty()) {
    d.error(1, 0, "empty file");
    return {};
  }
  std::optional<std::size_t> id_col, area_col;
  std::vector<std::pair<std::size_t, std::string>> crop_cols;
  std::set<std::string> crop_ids, seen;
  for (const auto& c : crops) crop_ids.insert(c.id);
  bool ok = true;
  for (std::size_t c = 0; c < t.header.size(); ++c) {
    const auto h = split_header(t.header[c]);
    if (!seen.insert(h.name).second) {
      d.error(1, c + 1, "duplicate column '" + h.name + "'");
      ok = false;
      continue;
    }
    if (h.name == "id") {
      id_col = c;
    } else if (h.name == "total_area" || crop_ids.count(h.name)) {
      if (h.unit && normalize_unit(*h.unit) != "ha") {
        d.error(1, c + 1, "unit mismatch in column " + h.name + ": got '" + *h.unit + "', expected 'ha'");
        ok = false;
      }
      if (h.name == "total_area")
        area_col = c;
      else
        crop_cols.emplace_back(c, h.name);
    } else {
      d.error(1, c + 1, "column '" + h.name + "' is not a known crop id");
      ok = false;
    }
  }
  if (!id_col) d.error(1, 0, "missing column 'id'");
  if (!area_col) d.error(1, 0, "missing column 'total_area'");
  if (!ok || !id_col || !area_col) return {};

  std::vector<SubWatershed> out;
  std::set<std::string> ids;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const auto& row = t.rows[r];
    const std::size_t line = t.lines[r];
    if (row.size() != t.header.size()) {
      d.error(line, 0, "expected " + std::to_string(t.header.size()) + " fields, got " + std::to_string(row.size()));
      continue;
    }
    bool bad = false;
    SubWatershed sw;
    sw.id = std::string(trim(row[*id_col]));
    if (sw.id.empty()) {
      d.error(line, *id_col + 1, "empty sub-watershed id");
      bad = true;
    } else if (!ids.insert(sw.id).second) {
      d.error(line, *id_col + 1, "duplicate sub-watershed id '" + sw.id + "'");
      bad = true;
    }
    if (is_missing(row[*area_col])) {
      d.error(line, *area_col + 1, "missing total_area");
      bad = true;
    } else if (auto v = numeric_cell(row, *area_col, "total_area", false, line, d, bad)) {
      sw.total_area = *v;
    }
    for (const auto& [col, crop] : crop_cols) {
      if (is_missing(row[col])) continue;  // crop not grown here
      if (auto v = numeric_cell(row, col, crop, true, line, d, bad)) sw.baseline_areas[crop] = *v;
    }
    if (!bad)
      for (auto& m : validate_subwatershed(sw)) d.error(line, 0, m);
    out.push_back(std::move(sw));
  }
  if (t.rows.empty()) d.error(0, 0, "no sub-watershed rows");
  return out;
}

namespace {

ElasticityParams parse_elasticity_csv(const std::string& text, const std::string& file, const NlebInstance& inst,
                                      std::vector<Diagnostic>& diags) {
  Diags d{diags, file};
  ElasticityParams e = default_elasticity(inst, 0.0);
  CsvTable t;
  try {
    t = parse_csv(text);
  } catch (const std::exception& ex) {
    d.error(0, 0, ex.what());
    return e;
  }
  static constexpr ColumnSpec specs[] = {
      {"crop_id", Cell::text, true, ""},
      {"baseline_quantity", Cell::optional_number, false, "kg"},
      {"baseline_price", Cell::optional_number, false, "{cur}/kg"},
      {"elasticity", Cell::number, true, ""},
  };
  std::array<std::optional<std::size_t>, 4> where{};
  if (t.header.empty() || !map_header(t.header, specs, inst.currency, d, where)) return e;
  std::map<std::string, std::size_t> index;
  for (std::size_t c = 0; c < inst.crops.size(); ++c) index[inst.crops[c].id] = c;
  std::vector<bool> seen(inst.crops.size(), false);
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const auto& row = t.rows[r];
    const std::size_t line = t.lines[r];
    if (row.size() != t.header.size()) {
      d.error(line, 0, "expected " + std::to_string(t.header.size()) + " fields, got " + std::to_string(row.size()));
      continue;
    }
    const std::string id(trim(row[*where[0]]));
    auto it = index.find(id);
    if (it == index.end()) {
      d.error(line, *where[0] + 1, "unknown crop id '" + id + "'");
      continue;
    }
    if (seen[it->second]) {
      d.error(line, *where[0] + 1, "duplicate crop id '" + id + "'");
      continue;
    }
    seen[it->second] = true;
    bool bad = false;
    if (where[1])
      if (auto v = numeric_cell(row, *where[1], "baseline_quantity", true, line, d, bad))
        e.baseline_quantity[it->second] = *v;
    if (where[2])
      if (auto v = numeric_cell(row, *where[2], "baseline_price", true, line, d, bad))
        e.baseline_price[it->second] = *v;
    if (is_missing(row[*where[3]]))
      d.error(line, *where[3] + 1, "missing elasticity");
    else if (auto v = numeric_cell(row, *where[3], "elasticity", false, line, d, bad))
      e.elasticity[it->second] = *v;
  }
  for (std::size_t c = 0; c < seen.size(); ++c)
    if (!seen[c]) d.error(0, 0, "crop " + inst.crops[c].id + " has no elasticity row");
  if (!has_errors(diags))
    for (auto& m : validate_elasticity(inst, e)) d.error(0, 0, m);
  return e;
}

// ---------------------------------------------------------------- esca.json

void read_esca(const json& j, Diags& d, EscaInstance& inst) {
  if (!j.is_object()) {
    d.error(1, 0, "expected a JSON object");
    return;
  }
  static const std::set<std::string> known{"currency", "coefficients", "targets", "max_heads", "weights",
                                           "scenarios", "default_scenario", "units"};
  for (const auto& [key, val] : j.items())
    if (!known.count(key)) d.warn(0, 0, "unknown field '" + key + "' ignored");
  if (j.contains("currency")) {
    if (j["currency"].is_string())
      inst.currency = j["currency"].get<std::string>();
    else
      d.error(0, 0, "currency must be a string");
  }
  check_json_units(j,
                   {{"sale", "{cur}/head"},
                    {"cost", "{cur}/head"},
                    {"area_per_head", "ha/head"},
                    {"p_emission", "kg/head"},
                    {"c_emission", "kg/head"},
                    {"organic_fert", "kg/head"},
                    {"water", "m3/head"},
                    {"yield", "kg/head"},
                    {"growth_rate", "1/yr"},
                    {"budget", "{cur}/yr"},
                    {"available_area", "ha"},
                    {"water_available", "m3/yr"}},
                   inst.currency, d);

  auto per_animal_object = [&](const json& parent, const std::string& key, bool required) -> const json* {
    if (!parent.contains(key)) {
      if (required) d.error(0, 0, "missing field " + key);
      return nullptr;
    }
    if (!parent[key].is_object()) {
      d.error(0, 0, key + " must be an object keyed by animal type");
      return nullptr;
    }
    for (const auto& [name, v] : parent[key].items())
      if (std::find(kAnimalNames.begin(), kAnimalNames.end(), name) == kAnimalNames.end())
        d.error(0, 0, key + ": unknown animal type '" + name + "'");
    return &parent[key];
  };

  if (const json* co = per_animal_object(j, "coefficients", true)) {
    for (std::size_t k = 0; k < 3; ++k) {
      const std::string animal(kAnimalNames[k]);
      if (!co->contains(animal) || !(*co)[animal].is_object()) {
        d.error(0, 0, "missing coefficients for " + animal);
        continue;
      }
      const json& a = (*co)[animal];
      auto& dst = inst.coeffs.animals[k];
      auto req = [&](const char* field, double& out) {
        if (!a.contains(field)) {
          d.error(0, 0, "missing coefficient " + animal + "." + field);
          return;
        }
        if (auto v = json_number(a, field, d)) out = *v;
      };
      req("sale", dst.sale);
      req("cost", dst.cost);
      req("p_emission", dst.p_emission);
      req("c_emission", dst.c_emission);
      req("organic_fert", dst.organic_fert);
      req("water", dst.water);
      req("yield", dst.yield);
      dst.area_per_head = json_number(a, "area_per_head", d).value_or(kAreaPerHead[k]);
      dst.growth_rate = json_number(a, "growth_rate", d).value_or(1.0);
    }
  }

  if (!j.contains("targets") || !j["targets"].is_object()) {
    d.error(0, 0, "missing object 'targets'");
  } else {
    const json& t = j["targets"];
    auto& dst = inst.targets;
    auto req = [&](const char* field, double& out) {
      if (!t.contains(field)) {
        d.error(0, 0, std::string("missing target ") + field);
        return;
      }
      if (auto v = json_number(t, field, d)) out = *v;
    };
    req("budget", dst.budget);
    req("available_area", dst.available_area);
    req("max_emission_p", dst.max_emission_p);
    req("max_emission_c", dst.max_emission_c);
    req("organic_fert_target", dst.organic_fert_target);
    req("max_chemical", dst.max_chemical);
    req("chemical_required", dst.chemical_required);
    req("water_available", dst.water_available);
    for (const char* group : {"typical_sale", "production_target"}) {
      const json* g = per_animal_object(t, group, true);
      if (!g) continue;
      auto& arr = std::string(group) == "typical_sale" ? dst.typical_sale : dst.production_target;
      for (std::size_t k = 0; k < 3; ++k) {
        const std::string animal(kAnimalNames[k]);
        if (!g->contains(animal)) {
          d.error(0, 0, std::string("missing target ") + group + "." + animal);
          continue;
        }
        if (auto v = json_number(*g, animal, d)) arr[k] = *v;
      }
    }
  }

  if (const json* mh = per_animal_object(j, "max_heads", false))
    for (std::size_t k = 0; k < 3; ++k) inst.max_heads[k] = json_number(*mh, std::string(kAnimalNames[k]), d);

  auto read_weights = [&](const json& w, const std::string& who, bool require_all) -> std::optional<WeightVector> {
    if (!w.is_object()) {
      d.error(0, 0, who + ": weights must be an object");
      return std::nullopt;
    }
    std::map<std::string, double> m;
    bool ok = true;
    for (const auto& [label, v] : w.items()) {
      if (!esca_weight_index(label)) {
        d.error(0, 0, who + ": unknown weight label '" + label + "'");
        ok = false;
        continue;
      }
      if (!v.is_number() || !std::isfinite(v.get<double>()) || v.get<double>() < 0.0) {
        d.error(0, 0, who + ": weight " + label + " must be a number >= 0");
        ok = false;
        continue;
      }
      m[label] = v.get<double>();
    }
    if (require_all)
      for (auto label : kEscaWeightLabels)
        if (!w.contains(std::string(label))) {
          d.error(0, 0, who + ": missing weight " + std::string(label));
          ok = false;
        }
    if (!ok) return std::nullopt;
    return esca_weights_from_map(m, false);
  };

  if (j.contains("scenarios")) {
    if (!j["scenarios"].is_array()) {
      d.error(0, 0, "scenarios must be an array");
    } else {
      for (std::size_t s = 0; s < j["scenarios"].size(); ++s) {
        const json& sc = j["scenarios"][s];
        if (!sc.is_object() || !sc.contains("name") || !sc["name"].is_string() || !sc.contains("weights")) {
          d.error(0, 0, "scenario " + std::to_string(s) + " needs a name and weights");
          continue;
        }
        NamedWeights nw;
        nw.name = sc["name"].get<std::string>();
        if (auto w = read_weights(sc["weights"], "scenario " + nw.name, true)) nw.weights = *w;
        inst.scenarios.push_back(std::move(nw));
      }
    }
  }
  if (j.contains("default_scenario")) {
    if (j["default_scenario"].is_string())
      inst.default_scenario = j["default_scenario"].get<std::string>();
    else
      d.error(0, 0, "default_scenario must be a string");
  }
  if (j.contains("weights")) {
    if (auto w = read_weights(j["weights"], "weights", false)) inst.weights = *w;
  } else if (!inst.default_scenario.empty()) {
    for (const auto& s : inst.scenarios)
      if (s.name == inst.default_scenario) inst.weights = s.weights;
  } else if (!inst.scenarios.empty()) {
    inst.weights = inst.scenarios.front().weights;
  }
}

}  // namespace

EscaInstance parse_esca_json(const std::string& text, const std::string& file, std::vector<Diagnostic>& diags) {
  Diags d{diags, file};
  EscaInstance inst;
  auto parsed = parse_json_text(text, d);
  if (!parsed) return inst;
  const std::size_t before = diags.size();
  read_esca(*parsed, d, inst);
  if (!has_errors(diags, before))
    for (auto& m : validate_esca(inst)) d.error(0, 0, m);
  return inst;
}

namespace {

std::string file_for_message(const std::string& m) {
  if (m.rfind("crop", 0) == 0 || m.rfind("duplicate crop", 0) == 0 || m == "no crops") return "crops.csv";
  if (m.rfind("sub-watershed", 0) == 0 || m == "no sub-watersheds" || m.rfind("expected 274", 0) == 0)
    return "subwatersheds.csv";
  if (m.rfind("expected", 0) == 0) return "crops.csv";
  return "totals.json";
}

std::string slurp(const std::filesystem::path& dir, const std::string& name, bool required,
                  std::map<std::string, std::string>& files, std::vector<Diagnostic>& diags) {
  const auto p = dir / name;
  if (!std::filesystem::exists(p)) {
    if (required)
      diags.push_back({p.string(), 0, 0, Severity::error, "required file not found: " + p.string()});
    return {};
  }
  try {
    auto text = read_file(p);
    files[name] = text;
    return text;
  } catch (const std::exception& e) {
    diags.push_back({p.string(), 0, 0, Severity::error, e.what()});
    return {};
  }
}

}  // namespace

DatasetBundle load_bundle(ModelKind kind, const std::filesystem::path& directory) {
  return load_bundle(kind, directory, true);
}

DatasetBundle load_bundle(ModelKind kind, const std::filesystem::path& directory, bool full_shape) {
  DatasetBundle b;
  b.kind = kind;
  b.directory = directory;
  std::vector<Diagnostic> diags;
  std::map<std::string, std::string> files;
  if (!std::filesystem::is_directory(directory))
    throw DatasetError({{directory.string(), 0, 0, Severity::error, "bundle directory not found: " + directory.string()}});

  auto fail_if_errors = [&] {
    if (has_errors(diags)) throw DatasetError(diags);
  };

  switch (kind) {
    case ModelKind::lkw: {
      const auto totals_text = slurp(directory, "totals.json", true, files, diags);
      const auto crops_text = slurp(directory, "crops.csv", true, files, diags);
      fail_if_errors();
      const RegionTotals totals = parse_totals_json(totals_text, "totals.json", diags);
      const std::string currency = totals.currency.empty() ? "EUR" : totals.currency;
      std::vector<std::size_t> lines;
      auto crops = parse_crops_csv(crops_text, "crops.csv", currency, diags, &lines);
      fail_if_errors();
      for (std::size_t i = 0; i < crops.size(); ++i)
        if (!crops[i].net_profit && !(crops[i].price && crops[i].yield))
          diags.push_back({"crops.csv", lines[i], 0, Severity::warning,
                           "crop " + crops[i].id + " has neither net_profit nor price and yield; profit taken as 0"});
      auto inst = make_lkw_instance(std::move(crops), totals);
      for (auto& m : validate_lkw(inst, full_shape)) diags.push_back({file_for_message(m), 0, 0, Severity::error, m});
      fail_if_errors();
      b.instance = std::move(inst);
      break;
    }
    case ModelKind::nleb: {
      const auto totals_text = slurp(directory, "totals.json", true, files, diags);
      const auto crops_text = slurp(directory, "crops.csv", true, files, diags);
      const auto sw_text = slurp(directory, "subwatersheds.csv", true, files, diags);
      const auto el_text = slurp(directory, "elasticity.csv", false, files, diags);
      fail_if_errors();
      const RegionTotals totals = parse_totals_json(totals_text, "totals.json", diags);
      const std::string currency = totals.currency.empty() ? "CAD" : totals.currency;
      auto crops = parse_crops_csv(crops_text, "crops.csv", currency, diags);
      fail_if_errors();
      auto sws = parse_subwatersheds_csv(sw_text, "subwatersheds.csv", crops, diags);
      fail_if_errors();
      auto inst = make_nleb_instance(std::move(crops), std::move(sws), totals);
      for (auto& m : validate_nleb(inst)) diags.push_back({file_for_message(m), 0, 0, Severity::error, m});
      fail_if_errors();
      if (files.count("elasticity.csv")) {
        b.elasticity = parse_elasticity_csv(el_text, "elasticity.csv", inst, diags);
        fail_if_errors();
      }
      b.instance = std::move(inst);
      break;
    }
    case ModelKind::esca: {
      const auto text = slurp(directory, "esca.json", true, files, diags);
      fail_if_errors();
      auto inst = parse_esca_json(text, "esca.json", diags);
      fail_if_errors();
      b.instance = std::move(inst);
      break;
    }
  }

  b.report.diagnostics = std::move(diags);
  for (const auto& [name, bytes] : files) {
    b.files.push_back(name);
    b.file_hashes[name] = sha256_hex(bytes);
  }
  b.content_hash = content_hash(files);
  return b;
}

// ---------------------------------------------------------------- JSON

namespace {

json jnum(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

double num(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  }
  throw std::invalid_argument("expected a number, got " + j.dump());
}

json jvec(const std::vector<double>& v) {
  json a = json::array();
  for (double x : v) a.push_back(jnum(x));
  return a;
}

std::vector<double> vec(const json& j) {
  std::vector<double> out;
  for (const auto& x : j) out.push_back(num(x));
  return out;
}

json jopt(const std::optional<double>& v) { return v ? jnum(*v) : json(nullptr); }

std::optional<double> opt(const json& j) {
  if (j.is_null()) return std::nullopt;
  return num(j);
}

}  // namespace

json to_json(const SolveResult& r) {
  json j;
  j["status"] = std::string(to_string(r.status));
  j["objective"] = jnum(r.objective);
  j["variable_labels"] = r.variable_labels;
  j["x"] = jvec(r.x);
  j["iterations"] = r.iterations;
  json cons = json::array();
  for (const auto& c : r.constraints)
    cons.push_back({{"label", c.label},
                    {"activity", jnum(c.activity)},
                    {"slack", jnum(c.slack)},
                    {"dual", jnum(c.dual)},
                    {"binding", c.binding}});
  j["constraints"] = std::move(cons);
  json goals = json::array();
  for (const auto& g : r.goals)
    goals.push_back({{"label", g.label},
                     {"achieved", jnum(g.achieved)},
                     {"target", jnum(g.target)},
                     {"d_plus", jnum(g.d_plus)},
                     {"d_minus", jnum(g.d_minus)},
                     {"w_plus", jnum(g.w_plus)},
                     {"w_minus", jnum(g.w_minus)}});
  j["goals"] = std::move(goals);
  j["ray"] = jvec(r.ray);
  j["infeasible_rows"] = r.infeasible_rows;
  j["log"] = r.log;
  return j;
}

SolveResult solve_result_from_json(const json& j) {
  SolveResult r;
  r.status = parse_status(j.at("status").get<std::string>());
  r.objective = num(j.at("objective"));
  r.variable_labels = j.at("variable_labels").get<std::vector<std::string>>();
  r.x = vec(j.at("x"));
  r.iterations = j.at("iterations").get<std::size_t>();
  for (const auto& c : j.at("constraints"))
    r.constraints.push_back({c.at("label").get<std::string>(), num(c.at("activity")), num(c.at("slack")),
                             num(c.at("dual")), c.at("binding").get<bool>()});
  for (const auto& g : j.at("goals"))
    r.goals.push_back({g.at("label").get<std::string>(), num(g.at("achieved")), num(g.at("target")),
                       num(g.at("d_plus")), num(g.at("d_minus")), num(g.at("w_plus")), num(g.at("w_minus"))});
  r.ray = vec(j.at("ray"));
  r.infeasible_rows = j.at("infeasible_rows").get<std::vector<std::string>>();
  r.log = j.at("log").get<std::vector<std::string>>();
  return r;
}

json to_json(const SweepGrid& g) {
  json j;
  json axes = json::array();
  for (const auto& a : g.axes) axes.push_back({{"name", a.name}, {"values", jvec(a.values)}});
  j["axes"] = std::move(axes);
  j["variable_labels"] = g.variable_labels;
  j["baseline_objective"] = jnum(g.baseline_objective);
  j["manifest"] = g.manifest;
  json cells = json::array();
  for (const auto& c : g.cells)
    cells.push_back({{"index", c.index},
                     {"coords", jvec(c.coords)},
                     {"status", std::string(to_string(c.status))},
                     {"objective", jopt(c.objective)},
                     {"delta_utility", jopt(c.delta_utility)},
                     {"binding", c.binding},
                     {"x", jvec(c.x)},
                     {"iterations", c.iterations}});
  j["cells"] = std::move(cells);
  return j;
}

SweepGrid sweep_grid_from_json(const json& j) {
  SweepGrid g;
  for (const auto& a : j.at("axes")) g.axes.push_back({a.at("name").get<std::string>(), vec(a.at("values"))});
  g.variable_labels = j.at("variable_labels").get<std::vector<std::string>>();
  g.baseline_objective = num(j.at("baseline_objective"));
  g.manifest = j.at("manifest");
  for (const auto& c : j.at("cells")) {
    SweepCell cell;
    cell.index = c.at("index").get<std::vector<std::size_t>>();
    cell.coords = vec(c.at("coords"));
    cell.status = parse_status(c.at("status").get<std::string>());
    cell.objective = opt(c.at("objective"));
    cell.delta_utility = opt(c.at("delta_utility"));
    cell.binding = c.at("binding").get<std::vector<std::string>>();
    cell.x = vec(c.at("x"));
    cell.iterations = c.at("iterations").get<std::size_t>();
    g.cells.push_back(std::move(cell));
  }
  return g;
}

json to_json(const FrankWolfeResult& r) {
  return {{"solution", to_json(r.solution)}, {"gap", jnum(r.gap)}, {"trace", jvec(r.trace)}};
}

FrankWolfeResult fw_result_from_json(const json& j) {
  FrankWolfeResult r;
  r.solution = solve_result_from_json(j.at("solution"));
  r.gap = num(j.at("gap"));
  r.trace = vec(j.at("trace"));
  return r;
}

json to_json(const std::vector<ContourPoint>& pts) {
  json a = json::array();
  for (const auto& p : pts) a.push_back({{"x", jnum(p.x)}, {"y", jnum(p.y)}, {"from", p.from}, {"to", p.to}});
  return a;
}

std::vector<ContourPoint> contour_from_json(const json& j) {
  std::vector<ContourPoint> out;
  for (const auto& p : j)
    out.push_back({num(p.at("x")), num(p.at("y")), p.at("from").get<std::size_t>(), p.at("to").get<std::size_t>()});
  return out;
}

json to_json(const SimplexConfig& c) {
  return {{"feasibility_tol", c.feasibility_tol},
          {"optimality_tol", c.optimality_tol},
          {"max_iterations", c.max_iterations},
          {"pivot_rule", std::string(to_string(c.pivot_rule))},
          {"refactor_interval", c.refactor_interval},
          {"binding_tol", c.binding_tol}};
}

SimplexConfig simplex_config_from_json(const json& j) {
  SimplexConfig c;
  if (j.contains("feasibility_tol")) c.feasibility_tol = num(j["feasibility_tol"]);
  if (j.contains("optimality_tol")) c.optimality_tol = num(j["optimality_tol"]);
  if (j.contains("max_iterations")) c.max_iterations = j["max_iterations"].get<std::size_t>();
  if (j.contains("pivot_rule")) c.pivot_rule = parse_pivot_rule(j["pivot_rule"].get<std::string>());
  if (j.contains("refactor_interval")) c.refactor_interval = j["refactor_interval"].get<std::size_t>();
  if (j.contains("binding_tol")) c.binding_tol = num(j["binding_tol"]);
  return c;
}

json to_json(const EscaInstance& inst) {
  json j;
  j["currency"] = inst.currency;
  json co = json::object();
  for (std::size_t k = 0; k < 3; ++k) {
    const auto& a = inst.coeffs.animals[k];
    co[std::string(kAnimalNames[k])] = {{"sale", a.sale},
                                        {"cost", a.cost},
                                        {"area_per_head", a.area_per_head},
                                        {"p_emission", a.p_emission},
                                        {"c_emission", a.c_emission},
                                        {"organic_fert", a.organic_fert},
                                        {"water", a.water},
                                        {"yield", a.yield},
                                        {"growth_rate", a.growth_rate}};
  }
  j["coefficients"] = std::move(co);
  const auto& t = inst.targets;
  json sale = json::object(), prod = json::object(), heads = json::object();
  for (std::size_t k = 0; k < 3; ++k) {
    sale[std::string(kAnimalNames[k])] = t.typical_sale[k];
    prod[std::string(kAnimalNames[k])] = t.production_target[k];
    heads[std::string(kAnimalNames[k])] = jopt(inst.max_heads[k]);
  }
  j["targets"] = {{"typical_sale", sale},
                  {"budget", t.budget},
                  {"available_area", t.available_area},
                  {"max_emission_p", t.max_emission_p},
                  {"max_emission_c", t.max_emission_c},
                  {"organic_fert_target", t.organic_fert_target},
                  {"max_chemical", t.max_chemical},
                  {"chemical_required", t.chemical_required},
                  {"water_available", t.water_available},
                  {"production_target", prod}};
  j["max_heads"] = std::move(heads);
  j["weights"] = esca_weights_to_map(inst.weights);
  json sc = json::array();
  for (const auto& s : inst.scenarios) sc.push_back({{"name", s.name}, {"weights", esca_weights_to_map(s.weights)}});
  j["scenarios"] = std::move(sc);
  j["default_scenario"] = inst.default_scenario;
  return j;
}

EscaInstance esca_instance_from_json(const json& j) {
  std::vector<Diagnostic> diags;
  Diags d{diags, "esca.json"};
  EscaInstance inst;
  read_esca(j, d, inst);
  if (has_errors(diags)) throw DatasetError(diags);
  return inst;
}

// ---------------------------------------------------------------- CSV export

namespace {

std::string opt_cell(const std::optional<double>& v) { return v ? format_sig(*v) : std::string(); }

std::string join(const std::vector<std::string>& v, char sep) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += sep;
    out += v[i];
  }
  return out;
}

}  // namespace

std::string grid_csv(const SweepGrid& g) {
  std::vector<std::string> header;
  for (const auto& a : g.axes) header.push_back(a.name);
  for (const char* h : {"status", "objective", "delta_utility", "binding"}) header.emplace_back(h);
  std::string out = csv_line(header);
  for (const auto& c : g.cells) {
    std::vector<std::string> row;
    for (double v : c.coords) row.push_back(format_sig(v));
    row.emplace_back(to_string(c.status));
    row.push_back(opt_cell(c.objective));
    row.push_back(opt_cell(c.delta_utility));
    row.push_back(join(c.binding, ';'));
    out += csv_line(row);
  }
  return out;
}

std::string surface_csv(const SweepGrid& g) {
  if (g.axes.size() != 2) throw std::invalid_argument("surface export needs a 2-D grid");
  std::vector<std::string> header{g.axes[0].name + "\\" + g.axes[1].name};
  for (double v : g.axes[1].values) header.push_back(format_sig(v));
  std::string out = csv_line(header);
  for (std::size_t i = 0; i < g.axes[0].values.size(); ++i) {
    std::vector<std::string> row{format_sig(g.axes[0].values[i])};
    for (std::size_t k = 0; k < g.axes[1].values.size(); ++k) row.push_back(opt_cell(g.at(i, k).delta_utility));
    out += csv_line(row);
  }
  return out;
}

std::string contour_csv(const SweepGrid& g, const std::vector<ContourPoint>& pts) {
  if (g.axes.size() != 2) throw std::invalid_argument("contour export needs a 2-D grid");
  std::string out = csv_line({g.axes[0].name, g.axes[1].name, "from_cell", "to_cell"});
  for (const auto& p : pts)
    out += csv_line({format_sig(p.x), format_sig(p.y), std::to_string(p.from), std::to_string(p.to)});
  return out;
}

std::string areas_csv(const SweepGrid& g, const std::vector<double>& baseline) {
  if (g.axes.size() != 1) throw std::invalid_argument("area export needs a 1-D grid");
  std::vector<std::string> header{"variable", "baseline"};
  for (const auto& c : g.cells) header.push_back(g.axes[0].name + "=" + format_sig(c.coords[0]));
  std::string out = csv_line(header);
  for (std::size_t v = 0; v < g.variable_labels.size(); ++v) {
    std::vector<std::string> row{g.variable_labels[v], v < baseline.size() ? format_sig(baseline[v]) : ""};
    for (const auto& c : g.cells) row.push_back(c.feasible() && v < c.x.size() ? format_sig(c.x[v]) : "");
    out += csv_line(row);
  }
  return out;
}

std::string solve_result_csv(const SolveResult& r) {
  std::string out = csv_line({"kind", "label", "value", "slack", "dual", "binding"});
  for (std::size_t i = 0; i < r.x.size(); ++i)
    out += csv_line({"variable", i < r.variable_labels.size() ? r.variable_labels[i] : "", format_sig(r.x[i]), "", "",
                     ""});
  for (const auto& c : r.constraints)
    out += csv_line({"constraint", c.label, format_sig(c.activity), format_sig(c.slack), format_sig(c.dual),
                     c.binding ? "1" : "0"});
  for (const auto& g : r.goals)
    out += csv_line({"goal", g.label, format_sig(g.achieved), format_sig(g.d_plus), format_sig(g.d_minus), ""});
  return out;
}

std::string esca_table_csv(const std::vector<ScenarioResult>& results) {
  std::vector<std::string> header{"key", "label", "unit"};
  std::vector<std::vector<double>> values;
  for (const auto& s : results) {
    header.push_back(s.name);
    values.push_back(s.result.optimal() ? esca_report_values(s.result) : std::vector<double>{});
  }
  std::string out = csv_line(header);
  const auto& rows = esca_report_rows();
  for (std::size_t r = 0; r < rows.size(); ++r) {
    std::vector<std::string> row{rows[r].key, rows[r].label, rows[r].unit};
    for (const auto& v : values) row.push_back(v.empty() ? "" : format_sig(v[r]));
    out += csv_line(row);
  }
  return out;
}

}  // namespace agriopt
