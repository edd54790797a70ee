#include "gemt/remote_oracles.hpp"

#include "gemt/errors.hpp"
#include "gemt/mesh_io.hpp"
#include "gemt/seeds.hpp"

#include <httplib.h>
#include <nlohmann/json.hpp>

#include <cstdlib>

namespace gemt {

using nlohmann::json;

namespace {

RemoteEndpoint endpoint_from_env(const char* url_var, const char* key_var) {
    const char* url = std::getenv(url_var);
    if (!url || !*url)
        throw ConfigError(std::string(url_var) + " must be set for the remote adapter");
    const char* key = std::getenv(key_var);
    RemoteEndpoint endpoint;
    endpoint.url = url;
    endpoint.key = key ? key : "";
    return endpoint;
}

// Splits "http://host:port/path" into base and path for cpp-httplib.
std::pair<std::string, std::string> split_url(const std::string& url) {
    const std::size_t scheme = url.find("://");
    const std::size_t path_start =
        url.find('/', scheme == std::string::npos ? 0 : scheme + 3);
    if (path_start == std::string::npos) return {url, "/"};
    return {url.substr(0, path_start), url.substr(path_start)};
}

json post_json(const RemoteEndpoint& endpoint, const json& payload, int retries,
               const char* what) {
    const auto [base, path] = split_url(endpoint.url);
    std::string last_error = "no attempt made";
    for (int attempt = 0; attempt < retries; ++attempt) {
        httplib::Client client(base);
        client.set_connection_timeout(10);
        client.set_read_timeout(60);
        httplib::Headers headers;
        if (!endpoint.key.empty()) headers.emplace("Authorization", "Bearer " + endpoint.key);
        auto res = client.Post(path, headers, payload.dump(), "application/json");
        if (!res) {
            last_error = "connection error";
            continue;
        }
        if (res->status != 200) {
            last_error = "status " + std::to_string(res->status);
            continue;
        }
        try {
            return json::parse(res->body);
        } catch (const json::exception& e) {
            last_error = std::string("bad JSON: ") + e.what();
        }
    }
    throw OracleFailure(std::string(what) + " adapter failed after " + std::to_string(retries) +
                        " attempts (" + last_error + ")");
}

} // namespace

RemoteEndpoint language_endpoint_from_env() {
    return endpoint_from_env("GEM_LLM_ENDPOINT", "GEM_LLM_KEY");
}

RemoteEndpoint visual_endpoint_from_env() {
    return endpoint_from_env("GEM_VLM_ENDPOINT", "GEM_VLM_KEY");
}

HttpLanguageOracle::HttpLanguageOracle(RemoteEndpoint endpoint, int retries)
    : endpoint_(std::move(endpoint)), retries_(retries) {}

OracleInfo HttpLanguageOracle::info() const {
    OracleInfo info;
    info.name = "remote";
    info.deterministic = false;
    info.max_context_tokens = 16000;
    info.vocabulary_size = 50000;
    return info;
}

std::string HttpLanguageOracle::generate(const LanguageRequest& request) {
    json payload;
    payload["instruction_text"] = request.instruction_text;
    payload["max_tokens"] = request.max_tokens;
    payload["temperature"] = request.temperature;
    payload["seed"] = request.seed;
    const json reply = post_json(endpoint_, payload, retries_, "language");
    if (!reply.contains("text") || !reply["text"].is_string())
        throw MalformedOracleOutput("language adapter reply lacks a 'text' field");
    return reply["text"].get<std::string>();
}

HttpVisualOracle::HttpVisualOracle(RemoteEndpoint endpoint, int retries)
    : endpoint_(std::move(endpoint)), retries_(retries) {}

OracleInfo HttpVisualOracle::info() const {
    OracleInfo info;
    info.name = "remote";
    info.deterministic = false;
    return info;
}

double HttpVisualOracle::score(const PhenotypeMesh& mesh, std::string_view domain_text) {
    const std::string obj = write_mesh(mesh, MeshFormat::obj);
    json payload;
    payload["domain"] = std::string(domain_text);
    payload["mesh_obj"] = obj;
    payload["mesh_hash"] = hash64(obj);
    const json reply = post_json(endpoint_, payload, retries_, "visual");
    if (!reply.contains("score") || !reply["score"].is_number())
        throw MalformedOracleOutput("visual adapter reply lacks a numeric 'score' field");
    const double score = reply["score"].get<double>();
    if (score < 0.0 || score > 1.0)
        throw MalformedOracleOutput("visual adapter score outside [0,1]");
    return score;
}

} // namespace gemt
