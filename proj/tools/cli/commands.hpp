#pragma once

#include "artifacts.hpp"
#include "run_config.hpp"

#include <functional>
#include <map>
#include <string>

namespace qmix::cli {

using Command = std::function<void(const RunConfig&, Artifacts&)>;

/// Subcommand name -> implementation. Each writes its artifacts and records
/// checks; the driver turns failed checks into exit code 2.
const std::map<std::string, Command>& commands();

void run_chain_info(const RunConfig& cfg, Artifacts& art);
void run_hitting(const RunConfig& cfg, Artifacts& art);
void run_search(const RunConfig& cfg, Artifacts& art);
void run_qssamp(const RunConfig& cfg, Artifacts& art);
void run_qlsamp(const RunConfig& cfg, Artifacts& art);
void run_gnp_spectrum(const RunConfig& cfg, Artifacts& art);
void run_gnp_mixing(const RunConfig& cfg, Artifacts& art);
void run_sigma_scaling(const RunConfig& cfg, Artifacts& art);
void run_verify(const RunConfig& cfg, Artifacts& art);

int thread_count(const RunConfig& cfg);

}  // namespace qmix::cli
