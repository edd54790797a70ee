#pragma once

#include "gemt/oracles.hpp"

#include <string>

namespace gemt {

// HTTP/JSON adapter contracts for the real model stack. Both adapters carry
// no determinism guarantee and are flagged as such in run logs.
//
// Language: POST endpoint with {"instruction_text","max_tokens","temperature",
// "seed"} -> {"text": ...}.
// Visual:   POST endpoint with {"domain","mesh_obj","mesh_hash"} ->
// {"score": ...} in [0,1].

struct RemoteEndpoint {
    std::string url;   // e.g. http://host:port/path
    std::string key;   // bearer credential; empty for none
};

// Reads GEM_LLM_ENDPOINT / GEM_LLM_KEY. Throws ConfigError when unset.
RemoteEndpoint language_endpoint_from_env();
// Reads GEM_VLM_ENDPOINT / GEM_VLM_KEY.
RemoteEndpoint visual_endpoint_from_env();

class HttpLanguageOracle final : public LanguageOracle {
public:
    explicit HttpLanguageOracle(RemoteEndpoint endpoint, int retries = 3);
    OracleInfo info() const override;
    std::string generate(const LanguageRequest& request) override;

private:
    RemoteEndpoint endpoint_;
    int retries_;
};

class HttpVisualOracle final : public VisualOracle {
public:
    explicit HttpVisualOracle(RemoteEndpoint endpoint, int retries = 3);
    OracleInfo info() const override;
    double score(const PhenotypeMesh& mesh, std::string_view domain_text) override;

private:
    RemoteEndpoint endpoint_;
    int retries_;
};

} // namespace gemt
