#pragma once

#include <optional>
#include <string>
#include <variant>

#include <json.hpp>

#include "mchain/chain.hpp"
#include "mchain/hitting.hpp"

namespace mchain {

// A chain in whichever numeric mode the source document declared.
struct ChainDoc {
    std::string mode;  // "exact" or "float"
    std::variant<MarkovChain<Rat>, MarkovChain<double>> chain;

    bool exact() const { return mode == "exact"; }
    const MarkovChain<Rat>& as_exact() const { return std::get<MarkovChain<Rat>>(chain); }
    const MarkovChain<double>& as_float() const { return std::get<MarkovChain<double>>(chain); }
    std::size_t n() const;

    MarkovChain<Rat> to_exact() const;    // ConfigError if the source was float
    MarkovChain<double> to_float() const; // always possible
};

// {"states": N, "mode": "exact"|"float", "rows": [[...]]}; exact entries are
// "p/q" strings, float entries are numbers.  Unknown keys are rejected.
ChainDoc chain_from_json(const nlohmann::json& doc);
nlohmann::json chain_to_json(const MarkovChain<Rat>& chain);
nlohmann::json chain_to_json(const MarkovChain<double>& chain);

// Reads a chain from a file path, or builds one of the named generators:
// "lazy-torus(n,d)", "biased-cycle(n,p)", "gnm(n,m,lazy|plain)".
ChainDoc load_chain(const std::string& spec);

// Recognizes the generator syntax without touching the filesystem.
std::optional<ChainDoc> parse_generator(const std::string& name);

// {"prefix": [[state indices]...], "tail": [state indices]}
SetSequence sequence_from_json(const nlohmann::json& doc, std::size_t universe);
nlohmann::json sequence_to_json(const SetSequence& seq);
SetSequence load_sequence(const std::string& path, std::size_t universe);

// Lossless scalar serialization: "p/q" strings for rationals, numbers for doubles.
inline nlohmann::json scalar_json(const Rat& v) { return to_string(v); }
inline nlohmann::json scalar_json(double v) { return v; }

nlohmann::json read_json_file(const std::string& path);
void write_text(const std::string& path, const std::string& body);

}  // namespace mchain
