#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "qfano/enumerator.hpp"
#include "qfano/orbifold_rr.hpp"
#include "qfano/rational.hpp"
#include "qfano/sarkisov.hpp"
#include "qfano/tables.hpp"

namespace qfano {

using ordered_json = nlohmann::ordered_json;

/// Rationals as "p/q" strings so that no precision is lost.
ordered_json to_json(const Rational& r);
/// [[r,b],...] in basket order.
ordered_json to_json(const Basket& b);
ordered_json to_json(const FanoNumericalType& nt);
ordered_json to_json(const CandidateRow& row);
ordered_json to_json(const CheckReport& report);
ordered_json to_json(const CaseSolution& c);
ordered_json to_json(const Family& f);

ordered_json config_json(const SearchConfig& config);

/// Full documents as printed by the command-line tool.
ordered_json enumerate_document(const SearchConfig& config, const std::vector<CandidateRow>& rows);
ordered_json chi_document(int q, const Basket& basket, const Rational& A3, const std::vector<int>& ts);
ordered_json analysis_document(const LinkContext& ctx, const LinkAnalysis& analysis);
/// `computed` is what the compare report indexes into; it may be empty for
/// tables verified by checks alone.
ordered_json verify_document(const GoldenTable& table, const std::string& source,
                             const std::vector<CandidateRow>& computed, const CompareReport* report,
                             const std::vector<CheckReport>& checks);

/// Two-space indented JSON followed by a newline.
std::string dump(const ordered_json& j);

std::string candidates_csv(const std::vector<CandidateRow>& rows);
std::string candidates_markdown(const std::vector<CandidateRow>& rows);
std::string analysis_markdown(const LinkContext& ctx, const LinkAnalysis& analysis, bool with_trace);
std::string verify_markdown(const GoldenTable& table, const std::string& source,
                            const std::vector<CandidateRow>& computed, const CompareReport* report,
                            const std::vector<CheckReport>& checks);

}  // namespace qfano
