#include <chronos/mock_providers.hpp>

#include <chronos/datetime.hpp>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <set>
#include <sstream>

namespace chronos {

std::vector<std::string> tokenize(const std::string& text) {
    std::vector<std::string> out;
    std::string cur;
    for (unsigned char ch : text) {
        if (std::isalnum(ch)) {
            cur.push_back(static_cast<char>(std::tolower(ch)));
        } else if (!cur.empty()) {
            out.push_back(cur);
            cur.clear();
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

HashEmbedder::HashEmbedder(std::size_t dim, uint64_t seed) : dim_(dim), seed_(seed) {
    if (dim_ == 0) throw std::invalid_argument("HashEmbedder: dim must be positive");
}

std::vector<std::vector<float>> HashEmbedder::embed(const std::vector<std::string>& texts) {
    std::vector<std::vector<float>> out;
    out.reserve(texts.size());
    for (const auto& text : texts) {
        std::mt19937_64 rng(seed_ ^ stable_hash(text));
        std::normal_distribution<double> gauss(0.0, 1.0);
        std::vector<double> v(dim_);
        double norm2 = 0.0;
        for (auto& x : v) {
            x = gauss(rng);
            norm2 += x * x;
        }
        double norm = std::sqrt(norm2);
        if (norm < 1e-12) {
            // Vanishingly unlikely; fall back to a fixed axis so output stays unit-length.
            v.assign(dim_, 0.0);
            v[0] = 1.0;
            norm = 1.0;
        }
        // Two passes: normalize in double, then renormalize after the float
        // round-trip so the stored vector itself has unit norm within 1e-6.
        std::vector<float> f(dim_);
        for (std::size_t i = 0; i < dim_; ++i) f[i] = static_cast<float>(v[i] / norm);
        double n2 = 0.0;
        for (float x : f) n2 += static_cast<double>(x) * x;
        double n = std::sqrt(n2);
        for (auto& x : f) x = static_cast<float>(x / n);
        out.push_back(std::move(f));
    }
    return out;
}

std::vector<double> TokenOverlapReranker::rescore(const std::string& question,
                                                  const std::vector<std::string>& docs) {
    auto qtoks = tokenize(question);
    std::set<std::string> q(qtoks.begin(), qtoks.end());
    std::vector<double> out;
    out.reserve(docs.size());
    for (const auto& doc : docs) {
        auto dtoks = tokenize(doc);
        std::set<std::string> d(dtoks.begin(), dtoks.end());
        if (q.empty() || d.empty()) {
            out.push_back(0.0);
            continue;
        }
        std::size_t inter = 0;
        for (const auto& t : d)
            if (q.count(t)) ++inter;
        out.push_back(static_cast<double>(inter) /
                      std::sqrt(static_cast<double>(q.size()) * static_cast<double>(d.size())));
    }
    return out;
}

std::vector<double> PassthroughReranker::rescore(const std::string&,
                                                 const std::vector<std::string>& docs) {
    std::vector<double> out(docs.size());
    for (std::size_t i = 0; i < docs.size(); ++i)
        out[i] = static_cast<double>(docs.size() - i);
    return out;
}

ScriptedChatProvider::ScriptedChatProvider(std::vector<ScriptEntry> entries)
    : entries_(std::move(entries)), cursors_(entries_.size(), 0) {}

void ScriptedChatProvider::add_entry(ScriptEntry entry) {
    std::lock_guard<std::mutex> lock(mu_);
    entries_.push_back(std::move(entry));
    cursors_.push_back(0);
}

void ScriptedChatProvider::set_fallback(
    std::function<std::optional<ChatReply>(const std::vector<ChatMessage>&)> fb) {
    std::lock_guard<std::mutex> lock(mu_);
    fallback_ = std::move(fb);
}

void ScriptedChatProvider::reset() {
    std::lock_guard<std::mutex> lock(mu_);
    std::fill(cursors_.begin(), cursors_.end(), 0);
}

ChatReply ScriptedChatProvider::complete(const std::vector<ChatMessage>& messages,
                                         const std::vector<nlohmann::json>&) {
    std::lock_guard<std::mutex> lock(mu_);

    std::string last_user;
    std::string system_text;
    for (const auto& m : messages) {
        if (m.role == "user") last_user = m.content;
        if (m.role == "system") system_text += m.content;
    }

    for (std::size_t i = 0; i < entries_.size(); ++i) {
        const auto& e = entries_[i];
        if (last_user.find(e.match) == std::string::npos) continue;
        bool ok = true;
        for (const auto& needle : e.require_system_contains)
            if (system_text.find(needle) == std::string::npos) ok = false;
        for (const auto& needle : e.require_system_lacks)
            if (system_text.find(needle) != std::string::npos) ok = false;
        if (!ok) continue;
        if (e.replies.empty())
            throw ProviderFailure("scripted entry for \"" + e.match + "\" has no replies", false);
        std::size_t idx = cursors_[i];
        if (idx >= e.replies.size()) idx = e.replies.size() - 1;  // repeat last when exhausted
        ++cursors_[i];
        return e.replies[idx];
    }

    if (fallback_) {
        if (auto reply = fallback_(messages)) return *reply;
    }
    throw ProviderFailure("no scripted reply matches user message: \"" +
                              last_user.substr(0, 120) + "\"",
                          false);
}

namespace {

// Verb lexicon: normalized form plus alias verb phrases used to build
// lexical variants of the extracted fact.
struct VerbRule {
    const char* surface;   // token looked for after "I "
    const char* norm;      // normalized verb stored on the event
    std::vector<const char*> alias_verbs;
};

const std::vector<VerbRule>& verb_rules() {
    static const std::vector<VerbRule> rules = {
        {"bought", "bought", {"picked up", "purchased", "acquired"}},
        {"purchased", "bought", {"picked up", "bought", "acquired"}},
        {"adopted", "adopted", {"took in", "welcomed", "brought home"}},
        {"started", "started", {"began", "took up", "kicked off"}},
        {"began", "started", {"started", "took up"}},
        {"finished", "finished", {"completed", "wrapped up", "got through"}},
        {"completed", "finished", {"finished", "wrapped up"}},
        {"visited", "visited", {"went to", "stopped by", "traveled to"}},
        {"joined", "joined", {"signed up for", "became a member of"}},
        {"quit", "quit", {"left", "stopped", "gave up"}},
        {"moved", "moved", {"relocated", "changed address"}},
        {"ran", "ran", {"completed", "took part in"}},
        {"got", "got", {"received", "picked up", "obtained"}},
        {"sold", "sold", {"let go of", "parted with"}},
        {"watched", "watched", {"saw", "viewed"}},
        {"read", "read", {"finished reading", "got through"}},
        {"tried", "tried", {"tested out", "gave a shot"}},
        {"planted", "planted", {"put in", "added to the garden"}},
    };
    return rules;
}

// Object-level alias overrides for specific well-known items.
std::vector<std::string> object_aliases(const std::string& object_lower) {
    if (object_lower.find("fitbit") != std::string::npos)
        return {"a fitness tracker", "a step counter", "a wearable"};
    if (object_lower.find("peloton") != std::string::npos)
        return {"an exercise bike", "a stationary bike"};
    return {};
}

std::string lower_copy(const std::string& s) {
    std::string out = s;
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

std::string strip_outer_punct(std::string s) {
    while (!s.empty() && (s.back() == '.' || s.back() == '!' || s.back() == '?' ||
                          s.back() == ',' || s.back() == ';' || s.back() == ' '))
        s.pop_back();
    while (!s.empty() && s.front() == ' ') s.erase(s.begin());
    return s;
}

std::string strip_leading_article(const std::string& s) {
    for (const char* art : {"a ", "an ", "the ", "my ", "our "}) {
        std::string prefix(art);
        if (lower_copy(s).rfind(prefix, 0) == 0) return s.substr(prefix.size());
    }
    return s;
}

}  // namespace

RuleBasedMockExtractor::RuleBasedMockExtractor() : resolver_(&TemporalResolver::built_in()) {}

nlohmann::json RuleBasedMockExtractor::extract(const nlohmann::json& request) {
    nlohmann::json events = nlohmann::json::array();
    if (!request.contains("turns") || !request["turns"].is_array())
        throw ProviderFailure("extract request missing turns array", false);

    for (const auto& turn : request["turns"]) {
        if (turn.value("role", "") != "user") continue;
        const std::string text = turn.value("text", "");
        const int index = turn.value("index", -1);

        // Split into sentences so multiple facts per turn each get a shot.
        std::vector<std::string> sentences;
        {
            std::string cur;
            for (char ch : text) {
                cur.push_back(ch);
                if (ch == '.' || ch == '!' || ch == '?') {
                    sentences.push_back(cur);
                    cur.clear();
                }
            }
            if (!cur.empty()) sentences.push_back(cur);
        }

        for (const auto& sentence : sentences) {
            const std::string low = lower_copy(sentence);
            std::size_t ipos = std::string::npos;
            // Find a standalone "i " start (sentence start or after space).
            for (std::size_t p = 0; p + 1 < low.size(); ++p) {
                if (low[p] == 'i' && low[p + 1] == ' ' &&
                    (p == 0 || low[p - 1] == ' ' || low[p - 1] == '"')) {
                    ipos = p;
                    break;
                }
            }
            if (ipos == std::string::npos) continue;

            std::string rest = sentence.substr(ipos + 2);
            const VerbRule* rule = nullptr;
            for (const auto& r : verb_rules()) {
                std::string v(r.surface);
                if (lower_copy(rest).rfind(v + " ", 0) == 0) {
                    rule = &r;
                    rest = rest.substr(v.size() + 1);
                    break;
                }
            }
            if (!rule) continue;

            // Pull off a trailing temporal expression, if the resolver recognizes one.
            std::string object = strip_outer_punct(rest);
            std::string expression;
            {
                auto toks = tokenize(object);
                // Try progressively longer suffixes (up to 5 words) as temporal phrases.
                std::vector<std::size_t> starts;
                {
                    bool in_tok = false;
                    for (std::size_t p = 0; p < object.size(); ++p) {
                        bool alnum = std::isalnum(static_cast<unsigned char>(object[p])) != 0;
                        if (alnum && !in_tok) starts.push_back(p);
                        in_tok = alnum;
                    }
                }
                std::size_t take = std::min<std::size_t>(5, starts.size());
                for (std::size_t n = take; n >= 1; --n) {
                    std::size_t from = starts[starts.size() - n];
                    std::string cand = strip_outer_punct(object.substr(from));
                    if (resolver_->classify(cand)) {
                        expression = cand;
                        object = strip_outer_punct(object.substr(0, from));
                        break;
                    }
                    if (n == 1) break;
                }
                (void)toks;
            }
            if (object.empty()) continue;

            std::string bare = strip_leading_article(object);
            std::vector<std::string> aliases = object_aliases(lower_copy(object));
            if (aliases.empty()) {
                for (const char* av : rule->alias_verbs) {
                    aliases.push_back(std::string(av) + " " + lower_copy(bare));
                    if (aliases.size() == 3) break;
                }
            } else {
                // Object-specific aliases pair with the first alias verb.
                std::vector<std::string> merged;
                for (const auto& oa : aliases) {
                    merged.push_back(std::string(rule->alias_verbs[0]) + " " + oa);
                    if (merged.size() == 3) break;
                }
                aliases = std::move(merged);
            }

            nlohmann::json ev;
            ev["subject"] = "user";
            ev["verb"] = rule->norm;
            ev["object"] = object;
            ev["aliases"] = aliases;
            ev["source_indices"] = nlohmann::json::array({index});
            if (!expression.empty())
                ev["time"] = nlohmann::json{{"expression", expression}};
            else
                ev["time"] = nlohmann::json{{"expression", ""}};
            events.push_back(std::move(ev));
        }
    }
    return nlohmann::json{{"events", events}};
}

ScriptedExtractionProvider::ScriptedExtractionProvider(std::vector<Entry> entries)
    : entries_(std::move(entries)) {}

nlohmann::json ScriptedExtractionProvider::extract(const nlohmann::json& request) {
    std::string all_text;
    if (request.contains("turns"))
        for (const auto& t : request["turns"]) all_text += t.value("text", "") + "\n";
    for (const auto& e : entries_)
        if (all_text.find(e.match) != std::string::npos) return e.response;
    return nlohmann::json{{"events", nlohmann::json::array()}};
}

ChatReply heuristic_guidance_reply(const std::vector<ChatMessage>& messages) {
    static const std::set<std::string> stop = {
        "a",    "an",   "the",  "i",    "my",   "me",    "we",    "our",  "you",  "your",
        "is",   "are",  "was",  "were", "be",   "been",  "do",    "did",  "does", "have",
        "has",  "had",  "what", "when", "where", "which", "who",   "how",  "why",  "many",
        "much", "of",   "in",   "on",   "at",   "to",    "for",   "and",  "or",   "it",
        "that", "this", "there", "time", "times"};

    std::string question;
    for (const auto& m : messages)
        if (m.role == "user") question = m.content;

    std::vector<std::string> keep;
    for (const auto& tok : tokenize(question)) {
        if (stop.count(tok)) continue;
        if (std::find(keep.begin(), keep.end(), tok) != keep.end()) continue;
        keep.push_back(tok);
    }

    ChatReply reply;
    std::ostringstream os;
    if (keep.empty()) {
        os << "- Information relevant to the question, both current and past\n";
    } else {
        std::size_t bullets = std::min<std::size_t>(3, (keep.size() + 2) / 3);
        std::size_t per = (keep.size() + bullets - 1) / bullets;
        for (std::size_t b = 0; b < bullets; ++b) {
            std::size_t from = b * per;
            if (from >= keep.size()) break;
            os << "- Details about ";
            for (std::size_t j = from; j < std::min(keep.size(), from + per); ++j) {
                if (j > from) os << " ";
                os << keep[j];
            }
            os << ", current and past\n";
        }
    }
    reply.text = os.str();
    return reply;
}

ChatReply heuristic_agent_reply(const std::vector<ChatMessage>& messages,
                                const std::vector<nlohmann::json>& tool_schemas) {
    std::string question;
    std::size_t observations = 0;
    std::string last_observation;
    for (const auto& m : messages) {
        if (m.role == "user" && question.empty()) question = m.content;
        if (m.role == "tool") {
            ++observations;
            last_observation = m.content;
        }
    }
    // Strip the "Question (YYYY-MM-DD): " wrapper when present.
    if (question.rfind("Question (", 0) == 0) {
        auto colon = question.find("): ");
        if (colon != std::string::npos) question = question.substr(colon + 3);
    }

    ChatReply reply;
    if (observations == 0 && !tool_schemas.empty()) {
        std::string tool = tool_schemas.front().value("name", "");
        for (const auto& schema : tool_schemas)
            if (schema.value("name", "") == "search_turns") tool = "search_turns";
        reply.thought = "Look for turns related to the question before answering.";
        reply.tool_calls.push_back({tool, nlohmann::json{{"query", question}, {"k", 5}}});
        return reply;
    }

    if (last_observation.empty()) {
        reply.text = "I could not find anything relevant in the conversation history.";
        return reply;
    }
    std::istringstream is(last_observation);
    std::ostringstream os;
    os << "Based on the conversation history:\n";
    std::string line;
    std::size_t kept = 0;
    while (std::getline(is, line) && kept < 3) {
        if (line.empty()) continue;
        os << line << "\n";
        ++kept;
    }
    reply.text = os.str();
    return reply;
}

}  // namespace chronos
