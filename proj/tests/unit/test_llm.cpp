#include "doctest.h"
#include "helpers.hpp"

#include "souschef/error.hpp"
#include "souschef/llm/base64.hpp"
#include "souschef/llm/extract.hpp"
#include "souschef/llm/prompt.hpp"
#include "souschef/llm/providers.hpp"

#include "httplib.h"

#include <atomic>
#include <fstream>
#include <random>
#include <thread>

using namespace souschef;
using namespace souschef::llm;

namespace {

template <class F>
Error capture(F&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e;
    }
    FAIL("expected an Error");
    return Error(ErrorKind::invalid_state, "unreachable");
}

std::string read_bytes(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// A local stand-in for the provider endpoint that answers with a scripted
// sequence of status codes and records what it received.
class FakeEndpoint {
public:
    explicit FakeEndpoint(std::vector<int> statuses, std::chrono::milliseconds delay = {})
        : statuses_(std::move(statuses)), delay_(delay) {
        server_.Post("/v1/generate", [this](const httplib::Request& req, httplib::Response& res) {
            std::size_t n = hits_++;
            std::this_thread::sleep_for(delay_);
            last_body_ = req.body;
            last_key_ = req.get_header_value("x-goog-api-key");
            int status = n < statuses_.size() ? statuses_[n] : statuses_.back();
            res.status = status;
            if (status == 200) {
                Json reply{{"candidates",
                            Json::array({{{"content", {{"parts", Json::array({{{"text", "hello "}},
                                                                               {{"text", "cook"}}})}}}}})}};
                res.set_content(reply.dump(), "application/json");
            } else {
                res.set_content(R"({"error":{"message":"nope"}})", "application/json");
            }
        });
        port_ = server_.bind_to_any_port("127.0.0.1");
        thread_ = std::thread([this] { server_.listen_after_bind(); });
        server_.wait_until_ready();
    }
    ~FakeEndpoint() {
        server_.stop();
        thread_.join();
    }

    std::string url() const { return "http://127.0.0.1:" + std::to_string(port_) + "/v1/generate"; }
    std::size_t hits() const { return hits_; }
    const std::string& last_body() const { return last_body_; }
    const std::string& last_key() const { return last_key_; }

private:
    std::vector<int> statuses_;
    std::chrono::milliseconds delay_;
    httplib::Server server_;
    std::thread thread_;
    int port_ = 0;
    std::atomic<std::size_t> hits_{0};
    std::string last_body_;
    std::string last_key_;
};

struct RecordedSleeps {
    std::vector<std::chrono::milliseconds> calls;
    std::function<void(std::chrono::milliseconds)> fn() {
        return [this](std::chrono::milliseconds d) { calls.push_back(d); };
    }
};

LiveConfig config_for(const FakeEndpoint& server, std::string key) {
    LiveConfig cfg;
    cfg.endpoint = server.url();
    cfg.api_key = std::move(key);
    return cfg;
}

LlmRequest chat_request(std::string text = "hi") {
    LlmRequest r;
    r.template_id = TemplateId::assistant_chat;
    r.user_text = std::move(text);
    return r;
}

} // namespace

// ---- prompt templates ------------------------------------------------------

TEST_CASE("every template renders once its placeholders are supplied") {
    for (TemplateId id : {TemplateId::detect_ingredients, TemplateId::generate_recipes,
                          TemplateId::step_feedback, TemplateId::assistant_chat, TemplateId::translate}) {
        const auto& tmpl = prompt_template(id);
        PromptContext ctx;
        for (const auto& name : tmpl.placeholders()) ctx[name] = "<" + name + ">";
        std::string out = render(tmpl, ctx);
        for (const auto& name : tmpl.placeholders()) {
            CHECK(out.find("<" + name + ">") != std::string::npos);
            CHECK(out.find("{" + name + "}") == std::string::npos);
        }
    }
}

TEST_CASE("template placeholders") {
    CHECK(prompt_template(TemplateId::generate_recipes).placeholders() ==
          std::vector<std::string>{"count", "ingredients", "profile", "language"});
    CHECK(prompt_template(TemplateId::translate).placeholders() ==
          std::vector<std::string>{"language", "text"});
    CHECK(prompt_template(TemplateId::step_feedback).placeholders() ==
          std::vector<std::string>{"recipe", "step", "language"});
}

TEST_CASE("missing placeholder is a template error naming it") {
    Error e = capture([] {
        render_prompt(TemplateId::generate_recipes,
                      {{"count", "3"}, {"profile", "x"}, {"language", "English"}});
    });
    CHECK(e.kind() == ErrorKind::template_error);
    CHECK(e.subject() == "ingredients");
}

TEST_CASE("substituted text is not rescanned and JSON braces stay literal") {
    PromptTemplate t{TemplateId::translate, R"(Say {text} in {language} as {"text": "..."})"};
    std::string out = render(t, {{"text", "{language}"}, {"language", "French"}});
    CHECK(out == R"(Say {language} in French as {"text": "..."})");
}

TEST_CASE("the detection prompt asks for a 0-1000 box frame") {
    std::string out = render_prompt(TemplateId::detect_ingredients, {{"language", "English"}});
    CHECK(out.find("0-1000") != std::string::npos);
    CHECK(out.find("[y_min, x_min, y_max, x_max]") != std::string::npos);
}

// ---- structured extraction -------------------------------------------------

TEST_CASE("fenced payload inside prose") {
    auto payload = extract_structured("Here you go:\n```json\n[{\"name\":\"Tomato\",\"box\":[1,2,3,4]}]\n```\nEnjoy",
                                      SchemaId::labels);
    auto labels = std::get<std::vector<RawLabel>>(payload);
    REQUIRE(labels.size() == 1);
    CHECK(labels[0] == RawLabel{"Tomato", {1, 2, 3, 4}, std::nullopt});
}

TEST_CASE("unfenced object with trailing comma") {
    auto payload = extract_structured(R"(Sure! {"verdict": "correct", "explanation": "ok",} thanks)",
                                      SchemaId::feedback);
    CHECK(std::get<FeedbackPayload>(payload) == FeedbackPayload{Verdict::correct, "ok"});
}

TEST_CASE("plain prose has no payload") {
    Error e = capture([] { extract_structured("I can't see any food here.", SchemaId::labels); });
    CHECK(e.kind() == ErrorKind::no_payload);
}

TEST_CASE("schema violations name the field") {
    Error e = capture([] {
        extract_structured(R"([{"name":"Egg","box":[1,2,"x",4]}])", SchemaId::labels);
    });
    CHECK(e.kind() == ErrorKind::schema_violation);
    CHECK(e.subject() == "[0].box[2]");

    Error f = capture([] { extract_structured(R"({"verdict":"maybe"})", SchemaId::feedback); });
    CHECK(f.kind() == ErrorKind::schema_violation);
    CHECK(f.subject() == "verdict");

    Error g = capture([] {
        extract_structured(R"([{"title":"T","required":[{"name":"egg","amount":"1"}],"steps":["a"],
                                "nutrition":{"calories":"many"}}])",
                           SchemaId::recipes);
    });
    CHECK(g.kind() == ErrorKind::schema_violation);
    CHECK(g.subject() == "[0].nutrition.calories");
}

TEST_CASE("strings containing braces and fence markers do not confuse the scanner") {
    std::string raw = "note: {not json} then {\"text\": \"a } b ``` c [\"}";
    CHECK(std::get<TranslationPayload>(extract_structured(raw, SchemaId::translation)).text ==
          "a } b ``` c [");
}

TEST_CASE("a fence that does not parse falls back to the next candidate") {
    std::string raw = "```\nnot json\n```\nthen ```json\n{\"text\":\"hola\"}\n```";
    CHECK(std::get<TranslationPayload>(extract_structured(raw, SchemaId::translation)).text == "hola");
}

TEST_CASE("box_2d alias and wrapped label list") {
    auto labels = std::get<std::vector<RawLabel>>(
        extract_structured(R"({"labels":[{"name":"Milk","box_2d":[10,20,30.4,40.6],"confidence":0.5}]})",
                           SchemaId::labels));
    REQUIRE(labels.size() == 1);
    CHECK(labels[0].box == std::array<int, 4>{10, 20, 30, 41});
    CHECK(labels[0].confidence == 0.5);
}

TEST_CASE("strip_trailing_commas leaves strings alone") {
    CHECK(strip_trailing_commas(R"([1, 2, ], {"a": ",]",})") == R"([1, 2 ], {"a": ",]"})");
}

TEST_CASE("lenient label decoding counts malformed entries") {
    auto batch = decode_labels_lenient(
        Json::parse(R"([{"name":"A","box":[1,2,3,4]}, {"box":[1,2,3,4]}, {"name":"B","box":[1,2]}])"));
    CHECK(batch.labels.size() == 1);
    CHECK(batch.malformed == 2);
}

namespace {

std::string random_name(std::mt19937& rng) {
    static const std::vector<std::string> names{"Tomato", "egg", "Olive Oil", "queso fresco", "火锅",
                                                "naan", "say \"cheese\"", "a}b", "x]y{z", "back\\slash"};
    return names[rng() % names.size()];
}

StructuredPayload random_payload(std::mt19937& rng) {
    switch (rng() % 4) {
    case 0: {
        std::vector<RawLabel> labels;
        for (int i = 0, n = static_cast<int>(rng() % 6); i < n; ++i) {
            RawLabel l{random_name(rng),
                       {int(rng() % 1000), int(rng() % 1000), int(rng() % 1001), int(rng() % 1001)},
                       std::nullopt};
            if (rng() % 2) l.confidence = (rng() % 1001) / 1000.0;
            labels.push_back(l);
        }
        return labels;
    }
    case 1: {
        std::vector<Recipe> recipes;
        for (int i = 0, n = 1 + static_cast<int>(rng() % 3); i < n; ++i) {
            Recipe r = testing::recipe_with("r" + std::to_string(i), {random_name(rng), random_name(rng)},
                                            1 + rng() % 4);
            r.title = random_name(rng) + " bowl";
            if (rng() % 2) r.nutrition.fiber_g = 2.5;
            if (rng() % 2) r.allergens = {"milk", random_name(rng)};
            recipes.push_back(r);
        }
        return recipes;
    }
    case 2:
        return FeedbackPayload{rng() % 2 ? Verdict::correct : Verdict::needs_adjustment,
                               "Cut " + random_name(rng) + " smaller"};
    default: return TranslationPayload{random_name(rng) + " en dés"};
    }
}

SchemaId schema_of(const StructuredPayload& p) {
    static constexpr SchemaId ids[] = {SchemaId::labels, SchemaId::recipes, SchemaId::feedback,
                                       SchemaId::translation};
    return ids[p.index()];
}

// Prose that may contain brace-like text but never a parseable JSON value.
std::string random_prose(std::mt19937& rng) {
    static const std::vector<std::string> bits{
        "Sure!", "Here is what I found.", "Let me know {if} you need more.", "(see below)",
        "Result:", "Note: [approximate]", "Happy cooking :)", "", "\n", "I hope this helps."};
    std::string out;
    for (int i = 0, n = static_cast<int>(rng() % 4); i < n; ++i) out += bits[rng() % bits.size()] + " ";
    return out;
}

std::string add_trailing_commas(const std::string& json) {
    std::string out;
    bool in_string = false, escaped = false;
    for (char c : json) {
        if (in_string) {
            if (escaped) escaped = false;
            else if (c == '\\') escaped = true;
            else if (c == '"') in_string = false;
        } else if (c == '"') {
            in_string = true;
        } else if ((c == '}' || c == ']') && !out.empty() && out.back() != '{' && out.back() != '[') {
            out += ',';
        }
        out += c;
    }
    return out;
}

} // namespace

TEST_CASE("wrapped payloads always decode back to the original") {
    std::mt19937 rng(2024);
    for (int n = 0; n < 1500; ++n) {
        StructuredPayload original = random_payload(rng);
        std::string body = encode_payload(original).dump(rng() % 2 ? 2 : -1);
        if (rng() % 3 == 0) body = add_trailing_commas(body);
        std::string raw;
        switch (rng() % 3) {
        case 0: raw = random_prose(rng) + "```json\n" + body + "\n```" + random_prose(rng); break;
        case 1: raw = random_prose(rng) + "```\n" + body + "\n```"; break;
        default: raw = random_prose(rng) + body + random_prose(rng); break;
        }
        INFO(raw);
        CHECK(extract_structured(raw, schema_of(original)) == original);
    }
}

TEST_CASE("malformed inputs always fail with a typed error") {
    std::mt19937 rng(99);
    for (int n = 0; n < 500; ++n) {
        std::string raw = testing::random_text(rng, 20);
        if (rng() % 2) raw += "{\"verdict\": " + std::to_string(rng() % 10);
        if (rng() % 3 == 0) raw += "[" + std::to_string(rng() % 10) + "]";
        Error e = capture([&] { extract_structured(raw, SchemaId::feedback); });
        CHECK((e.kind() == ErrorKind::no_payload || e.kind() == ErrorKind::schema_violation));
    }
}

// ---- requests and providers ------------------------------------------------

TEST_CASE("gateway validates image pairing and token budget") {
    auto gateway = testing::mock_gateway();
    LlmRequest detect;
    detect.template_id = TemplateId::detect_ingredients;
    CHECK(capture([&] { gateway.complete(detect); }).kind() == ErrorKind::invalid_input);

    LlmRequest chat = chat_request();
    chat.image = ImageData{"x", "image/png", 1, 1};
    CHECK(capture([&] { gateway.complete(chat); }).kind() == ErrorKind::invalid_input);

    LlmRequest zero = chat_request();
    zero.max_output_tokens = 0;
    CHECK(capture([&] { gateway.complete(zero); }).subject() == "max_output_tokens");
}

TEST_CASE("mock provider is deterministic and resolves tags") {
    MockProvider mock(testing::fixture_dir());
    LlmRequest r = chat_request();
    CHECK(mock.resolve_tag(r) == "default");
    r.fixture_tag = "suggest_reply";
    auto a = mock.complete(r);
    auto b = mock.complete(r);
    CHECK(a.raw_text == b.raw_text);
    CHECK(a.raw_text == read_bytes(testing::fixture_dir() / "assistant_chat__suggest_reply"));
    CHECK(a.provider == ProviderKind::mock);

    LlmRequest detect;
    detect.template_id = TemplateId::detect_ingredients;
    std::string png = read_bytes(testing::snapshot_path("five_items.png"));
    detect.image = ImageData{png, "image/png", 64, 48};
    CHECK(mock.resolve_tag(detect) == "five_items");
}

TEST_CASE("mock provider without a matching fixture rejects naming the file") {
    MockProvider mock(testing::fixture_dir());
    LlmRequest r = chat_request();
    r.fixture_tag = "no_such_tag";
    Error e = capture([&] { mock.complete(r); });
    CHECK(e.kind() == ErrorKind::provider_rejection);
    CHECK(e.subject() == "assistant_chat__no_such_tag");
}

TEST_CASE("base64 round trip") {
    CHECK(base64_encode("") == "");
    CHECK(base64_encode("f") == "Zg==");
    CHECK(base64_encode("fo") == "Zm8=");
    CHECK(base64_encode("foo") == "Zm9v");
    CHECK(base64_decode("Zm8=") == "fo");
    std::mt19937 rng(3);
    for (int n = 0; n < 200; ++n) {
        std::string bytes(rng() % 50, '\0');
        for (auto& c : bytes) c = static_cast<char>(rng());
        CHECK(base64_decode(base64_encode(bytes)) == bytes);
    }
}

TEST_CASE("live wire format") {
    LlmRequest r;
    r.template_id = TemplateId::step_feedback;
    r.system_instruction = "be brief";
    r.user_text = "check";
    r.image = ImageData{"abc", "image/jpeg", 2, 2};
    r.max_output_tokens = 512;
    Json body = Json::parse(LiveProvider::encode_body(r));
    CHECK(body["contents"][0]["parts"][0]["text"] == "check");
    CHECK(body["contents"][0]["parts"][1]["inline_data"]["mime_type"] == "image/jpeg");
    CHECK(body["contents"][0]["parts"][1]["inline_data"]["data"] == "YWJj");
    CHECK(body["systemInstruction"]["parts"][0]["text"] == "be brief");
    CHECK(body["generationConfig"]["maxOutputTokens"] == 512);

    CHECK(capture([] { LiveProvider::decode_body(R"({"candidates":[]})"); }).kind() ==
          ErrorKind::provider_rejection);
}

TEST_CASE("unreachable endpoint times out after three attempts with backoff") {
    RecordedSleeps sleeps;
    LiveConfig cfg;
    cfg.endpoint = "http://127.0.0.1:1/v1/generate";
    cfg.request_timeout = std::chrono::milliseconds(300);
    cfg.sleep = sleeps.fn();
    LiveProvider live(cfg);
    Error e = capture([&] { live.complete(chat_request()); });
    CHECK(e.kind() == ErrorKind::timeout);
    CHECK(e.attempts() == 3);
    CHECK(sleeps.calls == std::vector<std::chrono::milliseconds>{std::chrono::milliseconds(500),
                                                                std::chrono::milliseconds(1000)});
}

TEST_CASE("live provider against a local endpoint") {
    SUBCASE("success sends the key and concatenates parts") {
        FakeEndpoint server({200});
        LiveConfig cfg = config_for(server, "secret-key");
        LiveProvider live(cfg);
        auto res = live.complete(chat_request("what now?"));
        CHECK(res.raw_text == "hello cook");
        CHECK(res.provider == ProviderKind::live);
        CHECK(server.last_key() == "secret-key");
        CHECK(Json::parse(server.last_body())["contents"][0]["parts"][0]["text"] == "what now?");
    }
    SUBCASE("rate limiting is retried then reported") {
        FakeEndpoint server({429});
        RecordedSleeps sleeps;
        LiveConfig cfg = config_for(server, "k");
        cfg.sleep = sleeps.fn();
        Error e = capture([&] { LiveProvider(cfg).complete(chat_request()); });
        CHECK(e.kind() == ErrorKind::rate_limit_exhausted);
        CHECK(e.attempts() == 3);
        CHECK(server.hits() == 3);
        CHECK(sleeps.calls.size() == 2);
    }
    SUBCASE("a transient server error recovers") {
        FakeEndpoint server({503, 200});
        RecordedSleeps sleeps;
        LiveConfig cfg = config_for(server, "k");
        cfg.sleep = sleeps.fn();
        CHECK(LiveProvider(cfg).complete(chat_request()).raw_text == "hello cook");
        CHECK(server.hits() == 2);
        CHECK(sleeps.calls == std::vector<std::chrono::milliseconds>{std::chrono::milliseconds(500)});
    }
    SUBCASE("a slow endpoint exhausts the time budget") {
        FakeEndpoint server({200}, std::chrono::milliseconds(400));
        LiveConfig cfg = config_for(server, "k");
        cfg.request_timeout = std::chrono::milliseconds(150);
        cfg.sleep = [](std::chrono::milliseconds) {};
        auto start = std::chrono::steady_clock::now();
        Error e = capture([&] { LiveProvider(cfg).complete(chat_request()); });
        CHECK(e.kind() == ErrorKind::timeout);
        CHECK(std::chrono::steady_clock::now() - start < std::chrono::milliseconds(1500));
    }
    SUBCASE("client errors are not retried") {
        FakeEndpoint server({400});
        LiveConfig cfg = config_for(server, "k");
        cfg.sleep = [](std::chrono::milliseconds) {};
        Error e = capture([&] { LiveProvider(cfg).complete(chat_request()); });
        CHECK(e.kind() == ErrorKind::provider_rejection);
        CHECK(e.attempts() == 1);
        CHECK(server.hits() == 1);
    }
}
