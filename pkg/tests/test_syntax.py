"""Parser, pretty-printer, and decomposition machinery."""

import pytest
from hypothesis import given, settings

from strategies import runtime_stmts, source_stmts
from oracles import oracle_redex_positions

from whilelang.parser import ParseError, parse_program, tokenize
from whilelang.syntax import (
    Add, And, Begin, BeginScope, Call, Decl, Empty, Eq, ExprStmt, FDeclRhs,
    FUpdateRhs, FalseLit, If, Le, Mul, NatLit, Not, Par, ProcDecl, Protect,
    Protected, Seq, Sub, TrueLit, TypeName, Update, ValStmt, Var, VoidV,
    While, decompose, is_source_form, plug, pretty, pretty_expr,
)

NAT = TypeName.NAT
BOOL = TypeName.BOOL


class TestParseGoldens:
    def test_decl_then_update(self):
        assert parse_program("var Nat y := 4; y := y + 1") == Seq(
            Decl(NAT, "y", NatLit(4)),
            Update("y", Add(Var("y"), NatLit(1))),
        )

    def test_bool_decl_if(self):
        got = parse_program(
            "var Bool y := false; if not y then var Nat z := 1 else var Nat z := 3")
        assert got == Seq(
            Decl(BOOL, "y", FalseLit()),
            If(Not(Var("y")),
               Decl(NAT, "z", NatLit(1)),
               Decl(NAT, "z", NatLit(3))),
        )

    def test_while_loop(self):
        got = parse_program("var Nat y := 0; while y = 0 do y := y + 1")
        assert got == Seq(
            Decl(NAT, "y", NatLit(0)),
            While(Eq(Var("y"), NatLit(0)),
                  Update("y", Add(Var("y"), NatLit(1)))),
        )

    def test_begin_with_proc_sections_unseparated(self):
        got = parse_program(
            "begin var Nat w := 2 proc z is var Nat r := 4 call z; w := r end")
        assert got == Begin(
            (Decl(NAT, "w", NatLit(2)),),
            (ProcDecl("z", Decl(NAT, "r", NatLit(4))),),
            Seq(Call("z"), Update("w", Var("r"))),
        )

    def test_begin_with_semicolons_between_sections(self):
        with_semis = parse_program(
            "begin var Nat w := 2; proc z is var Nat r := 4; call z; w := r end")
        without = parse_program(
            "begin var Nat w := 2 proc z is var Nat r := 4 call z; w := r end")
        assert with_semis == without

    def test_par_binds_looser_than_seq(self):
        got = parse_program("x := 1; x := 2 par x := 3")
        assert got == Par(
            Seq(Update("x", NatLit(1)), Update("x", NatLit(2))),
            Update("x", NatLit(3)),
        )

    def test_braces_regroup(self):
        got = parse_program("x := 1; { x := 2 par x := 3 }")
        assert got == Seq(
            Update("x", NatLit(1)),
            Par(Update("x", NatLit(2)), Update("x", NatLit(3))),
        )

    def test_protect_delimits_a_full_statement(self):
        got = parse_program("protect x := 2; x := 4 end par x := 6")
        assert got == Par(
            Protect(Seq(Update("x", NatLit(2)), Update("x", NatLit(4)))),
            Update("x", NatLit(6)),
        )

    def test_begin_of_only_declarations_takes_last_as_body(self):
        got = parse_program("begin var Nat x := 1 end")
        assert got == Begin((), (), Decl(NAT, "x", NatLit(1)))
        got = parse_program("begin var Nat x := 1; var Nat y := 2 end")
        assert got == Begin((Decl(NAT, "x", NatLit(1)),), (),
                            Decl(NAT, "y", NatLit(2)))

    def test_unicode_operator_aliases(self):
        assert parse_program("while x ≤ 4 do x := x + 1") == \
            parse_program("while x <= 4 do x := x + 1")
        assert parse_program("x := y ∧ ¬ z") == \
            parse_program("x := y and not z")
        assert parse_program("x := a − b") == parse_program("x := a - b")

    def test_comments_and_whitespace(self):
        got = parse_program("// leading note\nvar Nat x := 1 // trailing\n")
        assert got == Decl(NAT, "x", NatLit(1))

    def test_expression_precedence(self):
        got = parse_program("x := 1 + 2 * 3 - 4")
        assert got == Update("x", Sub(Add(NatLit(1), Mul(NatLit(2), NatLit(3))),
                                      NatLit(4)))
        got = parse_program("x := a = 1 and b <= 2 and true")
        assert got == Update("x", And(Eq(Var("a"), NatLit(1)),
                                      And(Le(Var("b"), NatLit(2)), TrueLit())))

    def test_bare_variable_rhs_is_arithmetic(self):
        assert parse_program("x := y") == Update("x", Var("y"))


class TestParseErrors:
    @pytest.mark.parametrize("text", [
        "0",                       # a bare expression is not a statement
        "",                        # nothing at all
        "x := ",                   # missing right-hand side
        "begin end",               # a block needs a body
        "begin proc p is x := 1 end",
        "proc p is x := 1",        # procs only live in begin blocks
        "if true then x := 1",     # else is mandatory
        "x := true + 1",           # boolean in arithmetic position
        "x := 1 and true",         # arithmetic in boolean position
        "while 4 do x := 1",       # condition must be boolean-shaped
        "var Nat beginscope := 1",
        "beginscope",
        "endscope",
        "protected x := 1 end",
        "x := (1",                 # unbalanced parenthesis
        "x := 1; ",                # dangling separator
    ])
    def test_rejected(self, text):
        with pytest.raises(ParseError):
            parse_program(text)

    def test_error_carries_position_and_expectations(self):
        with pytest.raises(ParseError) as info:
            parse_program("var Nat x :=\n  @")
        assert info.value.line == 2
        with pytest.raises(ParseError) as info:
            parse_program("x + 1")
        assert info.value.expected
        assert info.value.line == 1

    def test_runtime_keyword_message(self):
        with pytest.raises(ParseError, match="runtime-only keyword"):
            parse_program("beginscope")


class TestPretty:
    @pytest.mark.parametrize("stmt,text", [
        (Decl(NAT, "y", NatLit(4)), "var Nat y := 4"),
        (ValStmt(VoidV()), "void"),
        (Protect(Update("x", NatLit(2))), "protect x := 2 end"),
        (Protected(Update("x", NatLit(2))), "protected x := 2 end"),
        (BeginScope(), "beginscope"),
        (Empty(), "ε"),
        (ExprStmt(Add(NatLit(1), NatLit(2))), "1 + 2"),
        (Seq(Seq(Update("a", NatLit(1)), Update("b", NatLit(2))),
             Update("c", NatLit(3))),
         "{ a := 1; b := 2 }; c := 3"),
        (Par(Update("a", NatLit(1)), Par(Update("b", NatLit(2)),
                                         Update("c", NatLit(3)))),
         "a := 1 par { b := 2 par c := 3 }"),
        (Seq(Update("a", NatLit(1)), Par(Update("b", NatLit(2)),
                                         Update("c", NatLit(3)))),
         "a := 1; { b := 2 par c := 3 }"),
        (While(TrueLit(), Seq(Update("a", NatLit(1)), Update("b", NatLit(2)))),
         "while true do { a := 1; b := 2 }"),
    ])
    def test_statements(self, stmt, text):
        assert pretty(stmt) == text

    @pytest.mark.parametrize("expr,text", [
        (Add(Var("a"), Add(Var("b"), Var("c"))), "a + (b + c)"),
        (Add(Add(Var("a"), Var("b")), Var("c")), "a + b + c"),
        (Sub(Var("a"), Sub(Var("b"), Var("c"))), "a - (b - c)"),
        (Mul(Add(Var("a"), Var("b")), Var("c")), "(a + b) * c"),
        (Not(And(Var("a"), Var("b"))), "not (a and b)"),
        (And(And(Var("a"), Var("b")), Var("c")), "(a and b) and c"),
        (And(Var("a"), And(Var("b"), Var("c"))), "a and b and c"),
        (Eq(Add(Var("a"), NatLit(1)), Var("b")), "a + 1 = b"),
        (Not(Not(Var("a"))), "not not a"),
    ])
    def test_expressions(self, expr, text):
        assert pretty_expr(expr) == text

    def test_begin_body_leading_decl_is_braced(self):
        block = Begin((), (), Seq(Decl(NAT, "x", NatLit(1)),
                                  Update("x", NatLit(2))))
        text = pretty(block)
        assert text == "begin { var Nat x := 1; x := 2 } end"
        assert parse_program(text) == block


class TestFlattening:
    @settings(max_examples=200)
    @given(source_stmts)
    def test_begin_sections_stay_flat_through_reparse(self, stmt):
        reparsed = parse_program(pretty(stmt))

        def walk(s):
            if isinstance(s, Begin):
                assert all(isinstance(d, Decl) for d in s.decls)
                assert all(isinstance(p, ProcDecl) for p in s.procs)
                for p in s.procs:
                    walk(p.body)
                walk(s.body)
            for attr in ("first", "second", "then_branch", "else_branch",
                         "body", "left", "right"):
                child = getattr(s, attr, None)
                if child is not None and not isinstance(child, str):
                    walk(child)

        walk(reparsed)


class TestSourceForm:
    def test_examples(self):
        assert is_source_form(Seq(Decl(NAT, "x", NatLit(1)),
                                  Update("x", NatLit(2))))
        assert not is_source_form(BeginScope())
        assert not is_source_form(Protected(ValStmt(VoidV())))
        assert not is_source_form(Seq(Update("x", NatLit(1)), Empty()))

    @settings(max_examples=200)
    @given(source_stmts)
    def test_generated_source_is_source(self, stmt):
        assert is_source_form(stmt)


class TestDecompose:
    def test_single_expression_redex_under_update(self):
        s = Update("x", Add(NatLit(1), NatLit(2)))
        [(ctx, redex)] = decompose(s)
        assert ctx == (FUpdateRhs("x"),)
        assert redex == Add(NatLit(1), NatLit(2))

    def test_seq_value_head_is_a_redex(self):
        s = Seq(ValStmt(VoidV()), Update("x", NatLit(1)))
        [(ctx, redex)] = decompose(s)
        assert ctx == ()
        assert redex == s

    def test_par_offers_both_sides(self):
        s = Par(Update("x", NatLit(1)), Update("x", NatLit(2)))
        found = decompose(s)
        assert len(found) == 2

    def test_protected_body_blocks_sibling(self):
        s = Par(Protected(Update("x", NatLit(2))), Update("x", NatLit(6)))
        found = decompose(s)
        assert len(found) == 1
        assert found[0][1] == Update("x", NatLit(2))

    def test_right_operand_needs_value_left(self):
        s = Update("x", Add(Add(NatLit(1), NatLit(2)), Add(NatLit(3), NatLit(4))))
        [(ctx, redex)] = decompose(s)
        assert redex == Add(NatLit(1), NatLit(2))

    def test_decl_rhs_context(self):
        s = Decl(NAT, "x", Var("y"))
        [(ctx, redex)] = decompose(s)
        assert ctx == (FDeclRhs(NAT, "x"),)
        assert redex == Var("y")

    @settings(max_examples=300)
    @given(runtime_stmts)
    def test_plug_inverts_decompose(self, stmt):
        for ctx, redex in decompose(stmt):
            assert plug(ctx, redex) == stmt

    @settings(max_examples=300)
    @given(runtime_stmts)
    def test_matches_brute_force_enumeration(self, stmt):
        fast = decompose(stmt)
        slow = oracle_redex_positions(stmt)
        assert len(fast) == len(slow)
        assert sorted(map(repr, (r for _, r in fast))) == \
            sorted(map(repr, (r for _, r in slow)))


class TestRoundTrip:
    @settings(max_examples=400)
    @given(source_stmts)
    def test_parse_of_pretty_is_identity(self, stmt):
        assert parse_program(pretty(stmt)) == stmt

    def test_token_positions(self):
        tokens = tokenize("x := 1;\n  y := 2")
        first_y = next(t for t in tokens if t.text == "y")
        assert (first_y.line, first_y.column) == (2, 3)
