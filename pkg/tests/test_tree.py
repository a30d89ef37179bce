import pytest

from reproforge.errors import EmptyNode, UnbalancedParens, UnknownLabel
from reproforge.tree import (TAGSET, ConstituencyTree, Token, parse_bracketed, parse_bracketed_many,
                             serialize, tokenize)


def test_token_invariants():
    t = Token("Save")
    assert t.lower == "save"
    with pytest.raises(ValueError):
        Token("")
    with pytest.raises(ValueError):
        Token("Save", lower="SAVE")


def test_tree_is_leaf_xor_children():
    with pytest.raises(ValueError):
        ConstituencyTree("NP")
    with pytest.raises(ValueError):
        ConstituencyTree("NN", (ConstituencyTree.leaf("NN", "x"),), Token("x"))


def test_parse_simple_tree():
    tree = parse_bracketed("(S (NP (PRP I)) (VP (VBP click)))")
    assert tree.label == "S"
    assert [c.label for c in tree.children] == ["NP", "VP"]
    assert tree.children[0].children[0].label == "PRP"
    assert tree.words() == ["I", "click"]


def test_unbalanced_reports_end_of_input():
    text = "(S (NP (PRP I))"
    with pytest.raises(UnbalancedParens) as exc:
        parse_bracketed(text)
    assert exc.value.offset == len(text)


def test_extra_close_paren():
    with pytest.raises(UnbalancedParens):
        parse_bracketed("(S (NP (PRP I))))")


def test_empty_node_and_unknown_label():
    with pytest.raises(EmptyNode):
        parse_bracketed("(S (NP ))")
    with pytest.raises(UnknownLabel):
        parse_bracketed("(S (XYZ (PRP I)))")


def test_root_wrapper_is_stripped():
    assert parse_bracketed("(ROOT (S (VP (VB Tap) (NP (NN OK)))))").label == "S"


def test_round_trip_with_literal():
    text = '(S (VP (VB Enter) (NP (NN "a b")) (PP (IN in) (NP (DT the) (NN box)))))'
    tree = parse_bracketed(text)
    assert tree.tokens()[1].literal
    assert serialize(tree) == text
    assert parse_bracketed(serialize(tree)) == tree


def test_many_records_split_on_blank_lines():
    trees = parse_bracketed_many("(S (VP (VB Tap) (NP (NN OK))))\n\n(S (VP (VB Scroll) (NP (NN down))))\n")
    assert [t.text() for t in trees] == ["Tap OK", "Scroll down"]


def test_tokenize_quotes_commas_and_numbers():
    toks = tokenize('When I enter "Hello, world" and 1.5, it fails.')
    texts = [t.text for t in toks]
    assert texts == ["When", "I", "enter", "Hello, world", "and", "1.5", ",", "it", "fails"]
    assert [t.literal for t in toks][3]


def test_tagset_membership():
    assert "NP" in TAGSET and "VBZ" in TAGSET and "," in TAGSET
    assert "ROOT" not in TAGSET
