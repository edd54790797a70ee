#include "gemt/oracle_factory.hpp"

#include "gemt/errors.hpp"
#include "gemt/mock_oracles.hpp"
#include "gemt/remote_oracles.hpp"

namespace gemt {

OracleSet make_oracles(const RunConfig& config) {
    OracleSet set;

    const std::string& language = config.oracle_selection.language;
    if (language == "scripted") {
        ScriptedOracleOptions options;
        if (!config.synonym_table_path.empty())
            options.synonyms = load_synonym_table(config.synonym_table_path);
        set.language = std::make_shared<ScriptedLanguageOracle>(std::move(options));
    } else if (language == "remote") {
        set.language = std::make_shared<HttpLanguageOracle>(language_endpoint_from_env());
    } else {
        throw ConfigError("unknown language adapter '" + language + "'");
    }

    const std::string& generator = config.oracle_selection.generator;
    if (generator == "procedural") {
        KeywordTable table = config.keyword_table_path.empty()
                                 ? default_keyword_table()
                                 : load_keyword_table(config.keyword_table_path);
        set.generator = std::make_shared<ProceduralGenerator>(std::move(table));
    } else {
        throw ConfigError("unknown generator adapter '" + generator + "'");
    }

    const std::string& visual = config.oracle_selection.visual;
    if (visual == "tag_overlap") {
        set.visual = std::make_shared<TagOverlapVisual>();
    } else if (visual == "remote") {
        set.visual = std::make_shared<HttpVisualOracle>(visual_endpoint_from_env());
    } else {
        throw ConfigError("unknown visual adapter '" + visual + "'");
    }

    return set;
}

} // namespace gemt
