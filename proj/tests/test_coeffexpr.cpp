#include <doctest.h>

#include <cmath>
#include <cstring>

#include "eigenbound/coeffexpr.hpp"
#include "eigenbound/errors.hpp"
#include "generators.hpp"

using namespace eigenbound;

TEST_CASE("tokenize reports positions and rejects stray characters") {
    auto toks = tokenize("1 + 2.5*x");
    REQUIRE(toks.size() == 5);
    CHECK(toks[0].lexeme == "1");
    CHECK(toks[2].lexeme == "2.5");
    CHECK(toks[2].position == 4);
    CHECK(toks[4].position == 8);
    for (std::size_t i = 1; i < toks.size(); ++i) CHECK(toks[i].position > toks[i - 1].position);

    try {
        tokenize("1 + $");
        FAIL("expected a lexical error");
    } catch (const LexError& e) {
        CHECK(e.offset == 4);
    }
}

TEST_CASE("precedence and associativity") {
    Expr e = parse("1+2*x");
    REQUIRE(e.root()->kind == NodeKind::add);
    CHECK(e.root()->children[0]->kind == NodeKind::constant);
    CHECK(e.root()->children[1]->kind == NodeKind::mul);
    CHECK(evaluate(parse("2^3^2"), 0.0) == doctest::Approx(512.0));
    CHECK(evaluate(parse("-x^2"), 3.0) == doctest::Approx(-9.0));
    CHECK(evaluate(parse("2^-1"), 0.0) == doctest::Approx(0.5));
    CHECK(evaluate(parse("(1+x)*(1-x)"), 0.5) == doctest::Approx(0.75));
    CHECK(evaluate(parse("pi"), 0.0) == doctest::Approx(M_PI));
    CHECK(evaluate(parse("e"), 0.0) == doctest::Approx(M_E));
}

TEST_CASE("malformed input is a syntax error at the offending token") {
    try {
        parse("1+*x");
        FAIL("expected a syntax error");
    } catch (const SyntaxError& e) {
        CHECK(e.offset == 2);
    }
    CHECK_THROWS_AS(parse("(1+x"), SyntaxError);
    CHECK_THROWS_AS(parse("1+x)"), SyntaxError);
    CHECK_THROWS_AS(parse("x+"), SyntaxError);
    CHECK_THROWS_AS(parse(""), SyntaxError);
    CHECK_THROWS_AS(parse("foo(x)"), LexError);
    CHECK_THROWS_AS(parse("pow(x)"), SyntaxError);
}

TEST_CASE("evaluate examples and domain errors") {
    CHECK(evaluate(parse("x*(1-x)"), 0.5) == doctest::Approx(0.25));
    CHECK(evaluate(parse("exp(-x^2/2)"), 0.0) == 1.0);
    CHECK_THROWS_AS(evaluate(parse("log(x)"), 0.0), DomainError);
    CHECK_THROWS_AS(evaluate(parse("1/x"), 0.0), DomainError);
    CHECK_THROWS_AS(evaluate(parse("x^(-1)"), 0.0), DomainError);
    CHECK_THROWS_AS(evaluate(parse("sqrt(x)"), -1.0), DomainError);
}

TEST_CASE("validate_positive") {
    CHECK(validate_positive(parse("1"), 1.0, 100).pass);
    auto bad = validate_positive(parse("x-0.5"), 1.0, 100);
    CHECK_FALSE(bad.pass);
    REQUIRE(bad.first_violation);
    CHECK(*bad.first_violation <= 0.5);
    CHECK(validate_positive(parse("x*(1-x)"), 1.0, 100).pass);
    CHECK_FALSE(validate_positive(parse("log(x)"), 1.0, 10).pass);
}

TEST_CASE("presets bypass parsing") {
    auto lap = preset("laplacian");
    REQUIRE(lap);
    CHECK(lap->a(0.3) == 1.0);
    CHECK(lap->b(0.3) == 0.0);
    auto ou = preset("ou");
    REQUIRE(ou);
    CHECK(ou->b(2.0) == -2.0);
    CHECK_FALSE(preset("heat"));
}

TEST_CASE("property: print then parse is the identity on 1000 random trees") {
    gen::Rng rng(20261016);
    int failures = 0;
    for (int k = 0; k < 1000; ++k) {
        Expr e = gen::expr(rng, gen::integer(rng, 0, 6));
        std::string text = gen::reflow(rng, e.to_string());
        Expr back = parse(text);
        if (!structurally_equal(e, back)) {
            ++failures;
            MESSAGE("round trip changed " << e.to_string() << " into " << back.to_string());
        }
    }
    CHECK(failures == 0);
}

TEST_CASE("property: evaluation is deterministic") {
    gen::Rng rng(7);
    for (int k = 0; k < 200; ++k) {
        Expr e = gen::expr(rng, 4);
        double x = gen::uniform(rng, 0.01, 3.0);
        double first = 0.0;
        bool ok = true;
        try {
            first = e(x);
        } catch (const DomainError&) {
            ok = false;
        }
        if (!ok) {
            CHECK_THROWS_AS(e(x), DomainError);
            continue;
        }
        double second = e(x);
        CHECK(std::memcmp(&first, &second, sizeof first) == 0);
    }
}

TEST_CASE("property: random token soup never crashes the parser") {
    gen::Rng rng(99);
    const char* pieces[] = {"x", "1", "2.5", "+", "-", "*", "/", "^", "(", ")", "exp", "log", ",", "pow", " "};
    for (int k = 0; k < 2000; ++k) {
        std::string s;
        int len = gen::integer(rng, 0, 40);
        for (int i = 0; i < len; ++i) s += pieces[gen::integer(rng, 0, 14)];
        try {
            parse(s);
        } catch (const Error&) {
        }
    }
    std::string deep(100000, '(');
    CHECK_THROWS_AS(parse(deep + "x"), SyntaxError);
}
