#pragma once

#include <string>

#include <json.hpp>

#include "plaque/dynamics.hpp"
#include "plaque/pullback.hpp"
#include "plaque/signature.hpp"

namespace plaque::report {

using nlohmann::json;

// Complex numbers serialize as [re, im] to keep documents locale-free.
json complex_json(dynamics::Complex z);
json cycle_json(const dynamics::Cycle& c);
json orbit_json(const pullback::BackwardOrbit& o);
json chain_json(const pullback::PullbackChain& chain);
json estimate_json(const engine::SignatureEstimate& e);
json regularity_json(const engine::RegularityResult& r);
json verify_json(const engine::VerifyReport& r);
json probe_json(const engine::ProbeReport& r);

// CSV dump of loop samples: level,sample_index,re,im,traversals
std::string chain_csv(const pullback::PullbackChain& chain);

}  // namespace plaque::report
