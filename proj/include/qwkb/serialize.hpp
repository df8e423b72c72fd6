#pragma once

#include <string>

#include <json.hpp>

#include "qwkb/arcs.hpp"
#include "qwkb/entropy.hpp"
#include "qwkb/simulate.hpp"
#include "qwkb/wkb.hpp"

namespace qwkb {

/// Write via a temp file and rename, so readers never see partial output.
void write_text_atomic(const std::string& path, const std::string& content);

/// CSV columns: t, m, re, im, abs, log_re, log_im
std::string grid_to_csv(const EigenGrid& grid);
nlohmann::json grid_to_json(const EigenGrid& grid);

nlohmann::json partition_to_json(const ArcPartition& part);
nlohmann::json regularity_to_json(const RegularityReport& rep);
nlohmann::json events_to_json(const std::vector<SpectralEvent>& events);

/// CSV columns: k, log_abs, phase
std::string trace_to_csv(const RecursionTrace& trace);
/// CSV columns: n_or_eps, rate, extrapolated, err_est
std::string growth_table_to_csv(const GrowthTable& table);

/// CSV columns: alpha, sigma
std::string profile_to_csv(const EntropyProfile& prof);
/// CSV columns: t, chi
std::string chi_to_csv(const EntropyProfile& prof);

/// CSV columns: x, s, re, im
std::string jet_to_csv(const FormalJet& jet);

nlohmann::json deflated_to_json(const DeflatedEquation& defl);

} // namespace qwkb
