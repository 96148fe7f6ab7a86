#include "optcap/report_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "optcap/error.hpp"

namespace optcap {
namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, sep)) out.push_back(field);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_number(const std::string& text, std::size_t line) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("spectrum CSV line " + std::to_string(line) + ": '" + text +
                      "' is not a number");
  }
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_spectrum_csv(std::ostream& os, const ModeSpectrum& spectrum) {
  os << "k,sigma,eta\n";
  for (std::size_t k = 0; k < spectrum.size(); ++k) {
    if (spectrum.eta[k] < kExportEtaFloor) break;
    os << (k + 1) << ',' << format_double(spectrum.sigma[k]) << ','
       << format_double(spectrum.eta[k]) << '\n';
  }
}

nlohmann::json spectrum_json(const ModeSpectrum& spectrum) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t k = 0; k < spectrum.size(); ++k) {
    if (spectrum.eta[k] < kExportEtaFloor) break;
    rows.push_back({{"k", k + 1}, {"sigma", spectrum.sigma[k]}, {"eta", spectrum.eta[k]}});
  }
  return rows;
}

ModeSpectrum read_spectrum_csv(std::istream& is) {
  std::string line;
  std::size_t number = 0;
  bool header = false;
  std::vector<double> eta;
  while (std::getline(is, line)) {
    ++number;
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    const auto fields = split(line, ',');
    if (!header) {
      if (fields.size() != 3 || trim(fields[0]) != "k" || trim(fields[1]) != "sigma" ||
          trim(fields[2]) != "eta") {
        throw ConfigError("spectrum CSV: expected header 'k,sigma,eta'");
      }
      header = true;
      continue;
    }
    if (fields.size() != 3) {
      throw ConfigError("spectrum CSV line " + std::to_string(number) + ": expected 3 fields");
    }
    const double e = parse_number(trim(fields[2]), number);
    if (!(e >= 0.0 && e <= 1.0)) {
      throw ConfigError("spectrum CSV line " + std::to_string(number) + ": eta outside [0, 1]");
    }
    eta.push_back(e);
  }
  if (!header) throw ConfigError("spectrum CSV: missing header");
  if (eta.empty()) throw ConfigError("spectrum CSV: no modes");
  return ModeSpectrum::from_transmissivities(std::move(eta));
}

ModeSpectrum read_spectrum_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open spectrum file '" + path + "'");
  return read_spectrum_csv(in);
}

void write_capacity_csv(std::ostream& os, const CapacitySummary& summary) {
  const CapacityReport& r = summary.report;
  os << "k,eta,n,contribution_nats\n";
  for (std::size_t k = 0; k < r.eta.size(); ++k) {
    os << (k + 1) << ',' << format_double(r.eta[k]) << ','
       << format_double(r.allocation.photons[k]) << ',' << format_double(r.contributions[k])
       << '\n';
  }
  os << "# total,N=" << format_double(summary.photons) << ",nats=" << format_double(r.total)
     << ",bits=" << format_double(nats_to_bits(r.total)) << ",formula=" << r.formula.str()
     << '\n';
  if (summary.closed_form) {
    os << "# closed_form,N=" << format_double(summary.photons)
       << ",nats=" << format_double(*summary.closed_form)
       << ",bits=" << format_double(nats_to_bits(*summary.closed_form))
       << ",formula=" << summary.closed_form_tag->str() << '\n';
  }
}

nlohmann::json capacity_json(const CapacitySummary& summary) {
  const CapacityReport& r = summary.report;
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t k = 0; k < r.eta.size(); ++k) {
    rows.push_back({{"k", k + 1},
                    {"eta", r.eta[k]},
                    {"n", r.allocation.photons[k]},
                    {"contribution_nats", r.contributions[k]}});
  }
  nlohmann::json out = {{"modes", rows},
                        {"N", summary.photons},
                        {"total_nats", r.total},
                        {"total_bits", nats_to_bits(r.total)},
                        {"formula", r.formula.str()}};
  if (summary.closed_form) {
    out["closed_form_nats"] = *summary.closed_form;
    out["closed_form_formula"] = summary.closed_form_tag->str();
  }
  return out;
}

void write_gain_csv(std::ostream& os, const std::vector<GainRow>& rows) {
  os << "N,C_lens_nats,C_fs_nats,gain,method,converged\n";
  for (const GainRow& row : rows) {
    os << format_double(row.photons) << ',' << format_double(row.lens) << ','
       << format_double(row.free_space) << ',' << (row.gain ? format_double(*row.gain) : "")
       << ',' << row.method << ',' << (row.converged ? "true" : "false") << '\n';
  }
}

nlohmann::json gain_json(const std::vector<GainRow>& rows) {
  nlohmann::json out = nlohmann::json::array();
  for (const GainRow& row : rows) {
    out.push_back({{"N", row.photons},
                   {"C_lens_nats", row.lens},
                   {"C_fs_nats", row.free_space},
                   {"gain", row.gain ? nlohmann::json(*row.gain) : nlohmann::json(nullptr)},
                   {"method", row.method},
                   {"converged", row.converged}});
  }
  return out;
}

}  // namespace optcap
