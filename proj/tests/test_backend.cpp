#include <doctest.h>

#include <thread>

#include "adept/errors.hpp"
#include "adept/scripted_backend.hpp"
#include "support/test_support.hpp"

using namespace adept;

namespace {

const std::filesystem::path kFixtures = std::filesystem::path(ADEPT_SOURCE_DIR) / "fixtures";

CompletionRequest request_for(const std::string& persona, Phase phase) {
    CompletionRequest request;
    request.messages = {{Role::system, "sys"}, {Role::user, "user"}};
    request.model_id = "m";
    request.persona_name = persona;
    request.phase = phase;
    return request;
}

Script two_persona_script() {
    Script script;
    script.personas = {"A", "B"};
    for (const char* name : {"A", "B"}) {
        script.entries.push_back({name, Phase::opening, std::string("open-") + name, std::nullopt});
        script.entries.push_back({name, Phase::rebuttal, std::string("reb-") + name, std::nullopt});
        script.entries.push_back({name, Phase::ballot, std::string("bal-") + name, std::nullopt});
    }
    return script;
}

} // namespace

TEST_CASE("scripted backend serves responses per (persona, phase) key in order") {
    Script script;
    script.personas = {"The Consequentialist"};
    script.entries.push_back({"The Consequentialist", Phase::ballot,
                              "Maximizing lives saved. <vote>1</vote>", std::nullopt});
    script.entries.push_back(
        {"The Consequentialist", Phase::ballot, "second response", std::nullopt});

    ScriptedBackend backend(script);
    CHECK(backend.remaining() == 2);
    CHECK(backend.complete(request_for("The Consequentialist", Phase::ballot)).text ==
          "Maximizing lives saved. <vote>1</vote>");
    CHECK(backend.complete(request_for("The Consequentialist", Phase::ballot)).text ==
          "second response");
    CHECK(backend.remaining() == 0);

    SUBCASE("exhausted queue reports script_exhausted") {
        try {
            backend.complete(request_for("The Consequentialist", Phase::ballot));
            FAIL("expected BackendError");
        } catch (const BackendError& error) {
            CHECK(error.kind() == BackendErrorKind::script_exhausted);
            CHECK_FALSE(error.retryable());
        }
    }
    SUBCASE("unknown key reports script_exhausted") {
        CHECK_THROWS_AS(backend.complete(request_for("Nobody", Phase::opening)), BackendError);
    }
}

TEST_CASE("script json round trip and completeness checks") {
    const Script script = two_persona_script();
    const std::string json_text = script_to_json(script);
    const Script reloaded = script_from_json(json_text, "<test>");
    CHECK(reloaded == script);
    CHECK(reloaded.entries.size() == 6);

    SUBCASE("missing (persona, phase) key") {
        Script broken = script;
        broken.entries.erase(
            std::remove_if(broken.entries.begin(), broken.entries.end(),
                           [](const ScriptEntry& e) {
                               return e.persona_name == "B" && e.phase == Phase::rebuttal;
                           }),
            broken.entries.end());
        CHECK_THROWS_AS(script_from_json(script_to_json(broken), "<test>"), MissingKey);
    }
    SUBCASE("malformed json") {
        CHECK_THROWS_AS(script_from_json("{not json", "<test>"), ParseError);
    }
    SUBCASE("wrong format version") {
        CHECK_THROWS_AS(script_from_json("{\"format_version\": \"adept-script/9\"}", "<test>"),
                        ParseError);
    }
}

TEST_CASE("fixture scripts cover six personas across three phases plus a summary") {
    const Script script = load_script(kFixtures / "scripts/debate1.script.json");
    CHECK(script.personas.size() == 6);
    CHECK(script.entries.size() == 6 * 3 + 1);
}

TEST_CASE("strict prompt hashes pin the recorded prompts") {
    Script script = two_persona_script();
    const CompletionRequest request = request_for("A", Phase::opening);
    script.entries[0].prompt_sha256 = prompt_hash(request.messages);

    SUBCASE("matching prompt passes") {
        ScriptedBackend backend(script, /*strict_prompt_hashes=*/true);
        CHECK(backend.complete(request).text == "open-A");
    }
    SUBCASE("different prompt reports script_mismatch") {
        ScriptedBackend backend(script, /*strict_prompt_hashes=*/true);
        CompletionRequest altered = request;
        altered.messages[1].content = "different user text";
        try {
            backend.complete(altered);
            FAIL("expected BackendError");
        } catch (const BackendError& error) {
            CHECK(error.kind() == BackendErrorKind::script_mismatch);
            CHECK_FALSE(error.retryable());
        }
    }
    SUBCASE("non-strict backend ignores recorded hashes") {
        ScriptedBackend backend(script, /*strict_prompt_hashes=*/false);
        CompletionRequest altered = request;
        altered.messages[1].content = "different user text";
        CHECK(backend.complete(altered).text == "open-A");
    }
}

TEST_CASE("scripted backend is safe under concurrent requests") {
    Script script;
    script.personas = {"A"};
    constexpr int kPerKey = 64;
    for (int i = 0; i < kPerKey; ++i) {
        script.entries.push_back({"A", Phase::opening, "a-" + std::to_string(i), std::nullopt});
        script.entries.push_back({"B", Phase::opening, "b-" + std::to_string(i), std::nullopt});
    }
    ScriptedBackend backend(script);

    std::vector<std::string> got_a(kPerKey);
    std::vector<std::string> got_b(kPerKey);
    std::thread consumer_a([&] {
        for (int i = 0; i < kPerKey; ++i) {
            got_a[i] = backend.complete(request_for("A", Phase::opening)).text;
        }
    });
    std::thread consumer_b([&] {
        for (int i = 0; i < kPerKey; ++i) {
            got_b[i] = backend.complete(request_for("B", Phase::opening)).text;
        }
    });
    consumer_a.join();
    consumer_b.join();

    // Per-key order is preserved even under concurrency.
    for (int i = 0; i < kPerKey; ++i) {
        CHECK(got_a[i] == "a-" + std::to_string(i));
        CHECK(got_b[i] == "b-" + std::to_string(i));
    }
    CHECK(backend.remaining() == 0);
}

TEST_CASE("make_request carries config and routing metadata") {
    PromptBundle bundle;
    bundle.persona_name = "The Nurse";
    bundle.phase = Phase::rebuttal;
    bundle.messages = {{Role::system, "s"}, {Role::user, "u"}};
    bundle.template_version = "t";

    ModelConfig config;
    config.model_id = "o3";
    config.temperature = 0.3;
    config.max_output_tokens = 77;

    const CompletionRequest request = make_request(bundle, config);
    CHECK(request.model_id == "o3");
    CHECK(request.temperature == doctest::Approx(0.3));
    CHECK(request.max_output_tokens == 77);
    CHECK(request.persona_name == "The Nurse");
    CHECK(request.phase == Phase::rebuttal);
    CHECK(request.messages == bundle.messages);
}

TEST_CASE("prompt_hash is content-sensitive and role-sensitive") {
    const std::vector<ChatMessage> a = {{Role::system, "x"}, {Role::user, "y"}};
    std::vector<ChatMessage> b = a;
    CHECK(prompt_hash(a) == prompt_hash(b));
    b[1].content = "z";
    CHECK(prompt_hash(a) != prompt_hash(b));
    b = a;
    b[0].role = Role::user;
    CHECK(prompt_hash(a) != prompt_hash(b));
}
