#include <doctest.h>

#include <algorithm>

#include "adept/analysis.hpp"
#include "adept/config.hpp"
#include "adept/errors.hpp"
#include "adept/prompt.hpp"
#include "adept/text.hpp"
#include "adept/trace.hpp"

using namespace adept;

namespace {

const std::filesystem::path kFixtures = std::filesystem::path(ADEPT_SOURCE_DIR) / "fixtures";

ScenarioSpec fixture_scenario() {
    return load_scenario(kFixtures / "scenario/options.yaml");
}

PersonaSpec minimal_persona(const std::string& name) {
    PersonaSpec persona;
    persona.name = name;
    persona.principle = "principle of " + name;
    persona.approach = {"approach-entry"};
    persona.core_questions = {"question-entry"};
    persona.decision_criteria = {"criterion-entry"};
    return persona;
}

Utterance make_utterance(const std::string& name, Phase phase, const std::string& response,
                         int seq) {
    Utterance utterance;
    utterance.seq = seq;
    utterance.phase = phase;
    utterance.persona_name = name;
    utterance.response = response;
    return utterance;
}

std::string all_content(const PromptBundle& bundle) {
    std::string out;
    for (const auto& message : bundle.messages) out += message.content + "\n";
    return out;
}

std::size_t count_headings(const std::string& text) {
    std::size_t count = 0;
    std::size_t pos = 0;
    while ((pos = text.find("## ", pos)) != std::string::npos) {
        if (pos == 0 || text[pos - 1] == '\n') ++count;
        pos += 3;
    }
    return count;
}

} // namespace

TEST_CASE("build_system_message renders the deontologist fully") {
    const auto panel = load_personas(kFixtures / "personas");
    const auto it = std::find_if(panel.begin(), panel.end(),
                                 [](const PersonaSpec& p) { return p.name == "The Deontologist"; });
    REQUIRE(it != panel.end());

    const std::string message = build_system_message(*it);
    CHECK(contains(message, "acting from duty according to universal moral principles"));
    for (const auto& move : it->forbidden_moves) CHECK(contains(message, move));
    CHECK(contains(message, "## Forbidden Moves"));
}

TEST_CASE("build_system_message on a minimal persona emits exactly the five required headings") {
    const std::string message = build_system_message(minimal_persona("Plain"));
    CHECK(count_headings(message) == 5);
    for (const char* heading :
         {"## Role", "## Principle", "## Approach", "## Core Questions", "## Decision Criteria"}) {
        CHECK(contains(message, heading));
    }
}

TEST_CASE("distinct personas produce distinct system messages") {
    CHECK(build_system_message(minimal_persona("A")) != build_system_message(minimal_persona("B")));
}

TEST_CASE("compose_opening embeds scenario and options verbatim") {
    const ScenarioSpec scenario = fixture_scenario();
    const PersonaSpec advocate = load_personas(kFixtures / "personas_set_a")[0];

    const PromptBundle bundle = compose_opening(scenario, advocate);
    REQUIRE(bundle.messages.size() == 2);
    CHECK(bundle.messages[0].role == Role::system);
    CHECK(bundle.phase == Phase::opening);
    CHECK(bundle.template_version == kTemplateVersion);

    const std::string& user = bundle.messages[1].content;
    CHECK(contains(user, scenario.narrative));
    for (const auto& option : scenario.options) {
        CHECK(contains(user, option.label));
        CHECK(contains(user, option.description));
    }

    // No other panel member appears anywhere in the bundle.
    const std::string everything = all_content(bundle);
    for (const auto& other : load_personas(kFixtures / "personas_set_a")) {
        if (other.name == advocate.name) continue;
        CHECK_FALSE(contains(everything, other.name));
    }

    // Purity: identical inputs, byte-identical bundles.
    CHECK(bundle == compose_opening(scenario, advocate));
}

TEST_CASE("compose_rebuttal embeds every opening, attributed, in panel order") {
    const ScenarioSpec scenario = fixture_scenario();
    const auto panel = load_personas(kFixtures / "personas_set_a");

    std::vector<Utterance> openings;
    for (std::size_t i = 0; i < panel.size(); ++i) {
        openings.push_back(make_utterance(panel[i].name, Phase::opening,
                                          "opening-text-" + std::to_string(i),
                                          static_cast<int>(i)));
    }

    const PromptBundle bundle = compose_rebuttal(scenario, panel, panel[2], openings);
    const std::string& user = bundle.messages[1].content;
    std::size_t last_pos = 0;
    for (const auto& opening : openings) {
        const std::string header = "\u2014 " + opening.persona_name + " (opening):";
        const auto pos = user.find(header);
        REQUIRE(pos != std::string::npos);
        CHECK(pos > last_pos);
        last_pos = pos;
        CHECK(contains(user, opening.response));
    }

    SUBCASE("missing opening raises IncompletePhase") {
        openings.pop_back();
        CHECK_THROWS_AS(compose_rebuttal(scenario, panel, panel[2], openings), IncompletePhase);
    }
    SUBCASE("wrong phase raises IncompletePhase") {
        openings.back().phase = Phase::rebuttal;
        CHECK_THROWS_AS(compose_rebuttal(scenario, panel, panel[2], openings), IncompletePhase);
    }
}

TEST_CASE("compose_rebuttal on a single-persona panel embeds only that opening") {
    const ScenarioSpec scenario = fixture_scenario();
    const std::vector<PersonaSpec> panel = {minimal_persona("Solo")};
    const std::vector<Utterance> openings = {
        make_utterance("Solo", Phase::opening, "solo-opening", 0)};
    const PromptBundle bundle = compose_rebuttal(scenario, panel, panel[0], openings);
    CHECK(contains(bundle.messages[1].content, "solo-opening"));
}

TEST_CASE("compose_ballot lists the full dialogue and the vote instruction") {
    const ScenarioSpec scenario = fixture_scenario();
    const auto panel = load_personas(kFixtures / "personas_set_a");

    std::vector<Utterance> openings;
    std::vector<Utterance> rebuttals;
    for (std::size_t i = 0; i < panel.size(); ++i) {
        openings.push_back(make_utterance(panel[i].name, Phase::opening,
                                          "opening-" + std::to_string(i), static_cast<int>(i)));
        rebuttals.push_back(make_utterance(panel[i].name, Phase::rebuttal,
                                           "rebuttal-" + std::to_string(i),
                                           static_cast<int>(panel.size() + i)));
    }

    const PromptBundle bundle = compose_ballot(scenario, panel, panel[0], openings, rebuttals);
    const std::string& user = bundle.messages[1].content;

    // All 12 dialogue utterances of a Debate-1-shaped panel.
    for (const auto& utterance : openings) CHECK(contains(user, utterance.response));
    for (const auto& utterance : rebuttals) CHECK(contains(user, utterance.response));

    // The instruction enumerates exactly the legal option ids.
    CHECK(contains(user, "one of: 1, 2, 3, 4"));

    // Secrecy proxy: the prompt never contains the literal lowercase tag.
    CHECK_FALSE(contains(all_content(bundle), "<vote>"));

    SUBCASE("incomplete dialogue raises IncompletePhase") {
        rebuttals.pop_back();
        CHECK_THROWS_AS(compose_ballot(scenario, panel, panel[0], openings, rebuttals),
                        IncompletePhase);
    }
}

TEST_CASE("compose_ballot_corrective appends the corrective instruction") {
    const ScenarioSpec scenario = fixture_scenario();
    const std::vector<PersonaSpec> panel = {minimal_persona("A"), minimal_persona("B")};
    const std::vector<Utterance> openings = {
        make_utterance("A", Phase::opening, "oa", 0),
        make_utterance("B", Phase::opening, "ob", 1),
    };
    const std::vector<Utterance> rebuttals = {
        make_utterance("A", Phase::rebuttal, "ra", 2),
        make_utterance("B", Phase::rebuttal, "rb", 3),
    };
    const PromptBundle plain = compose_ballot(scenario, panel, panel[0], openings, rebuttals);
    const PromptBundle retry =
        compose_ballot_corrective(scenario, panel, panel[0], openings, rebuttals);
    CHECK(contains(retry.messages[1].content, "did not contain a valid vote tag"));
    CHECK(retry.messages[1].content.size() > plain.messages[1].content.size());
    CHECK(retry.messages[0] == plain.messages[0]);
}

TEST_CASE("compose_summary needs a complete trace and embeds the tally") {
    const ScenarioSpec scenario = fixture_scenario();
    const std::vector<PersonaSpec> panel = {minimal_persona("A"), minimal_persona("B")};

    DebateTrace trace;
    trace.scenario = scenario;
    trace.personas = panel;
    trace.template_version = kTemplateVersion;
    trace.utterances = {
        make_utterance("A", Phase::opening, "oa", 0),
        make_utterance("B", Phase::opening, "ob", 1),
        make_utterance("A", Phase::rebuttal, "ra", 2),
        make_utterance("B", Phase::rebuttal, "rb", 3),
    };
    for (const char* name : {"A", "B"}) {
        Ballot ballot;
        ballot.persona_name = name;
        ballot.attempt_log.push_back({});
        ballot.attempt_log.back().response = "just <vote>2</vote>";
        ballot.parsed_option = 2;
        ballot.justification = ""; // degenerate justification renders fine
        ballot.status = BallotStatus::valid;
        trace.ballots.push_back(std::move(ballot));
    }

    SUBCASE("missing tally raises IncompleteTrace") {
        CHECK_THROWS_AS(compose_summary(trace), IncompleteTrace);
    }

    trace.tally = compute_tally(trace.ballots, scenario.options);
    const PromptBundle bundle = compose_summary(trace);
    CHECK(bundle.persona_name == kSummariserName);
    CHECK(bundle.phase == Phase::summary);
    CHECK(bundle.messages[0].role == Role::system);
    CHECK(contains(bundle.messages[1].content, "Option 2: 2"));
    CHECK(contains(bundle.messages[1].content, "oa"));
    CHECK(contains(bundle.messages[1].content, "rb"));
}

TEST_CASE("template fingerprint is pinned to the template version") {
    // Any template edit must bump kTemplateVersion and refreeze this digest.
    CHECK(kTemplateVersion == "adept-templates/1.0.0");
    CHECK(template_fingerprint() ==
          "e94797a27dfb0053af0d0915af319bd5998c0b12248ad5e3efb935ab3a1c4915");
}
