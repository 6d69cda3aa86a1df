#include "chronos/providers.hpp"

#include <algorithm>

namespace chronos {

json ChatReply::to_json() const {
    json j;
    if (!thought.empty()) j["thought"] = thought;
    if (!tool_calls.empty()) {
        json calls = json::array();
        for (const auto& c : tool_calls) calls.push_back(c.to_json());
        j["tool_calls"] = calls;
    }
    if (!text.empty() || tool_calls.empty()) j["text"] = text;
    return j;
}

ChatReply ChatReply::from_json(const json& j) {
    ChatReply r;
    r.text = j.value("text", "");
    r.thought = j.value("thought", "");
    if (j.contains("tool_calls")) {
        for (const auto& c : j["tool_calls"]) {
            ToolInvocation inv;
            inv.name = c.value("name", "");
            inv.arguments = c.value("arguments", json::object());
            r.tool_calls.push_back(std::move(inv));
        }
    }
    return r;
}

std::vector<RankedDoc> rank_docs(Reranker& reranker, const std::string& question,
                                 const std::vector<std::string>& docs) {
    std::vector<double> scores = reranker.rescore(question, docs);
    if (scores.size() != docs.size())
        throw ProviderFailure("reranker returned " + std::to_string(scores.size()) +
                                  " scores for " + std::to_string(docs.size()) + " docs",
                              false);
    std::vector<RankedDoc> out;
    out.reserve(docs.size());
    for (size_t i = 0; i < docs.size(); ++i) out.push_back({i, scores[i]});
    std::stable_sort(out.begin(), out.end(),
                     [](const RankedDoc& a, const RankedDoc& b) { return a.score > b.score; });
    return out;
}

}  // namespace chronos
