import pytest

from reproforge.errors import OutOfGrammar
from reproforge.grammar import parse_restricted
from reproforge.tree import parse_bracketed, serialize, tokenize


def test_click_with_modifier():
    tree = parse_restricted("I click the CANCEL button in the circle")
    assert serialize(tree) == (
        "(S (NP (PRP I)) (VP (VBP click) (NP (DT the) (NN CANCEL) (NN button)) "
        "(PP (IN in) (NP (DT the) (NN circle)))))"
    )


def test_clause_coordination():
    tree = parse_restricted("I tap Save and I rotate the screen")
    assert [c.label for c in tree.children] == ["S", "CC", "S"]
    assert tree.children[1].token.text == "and"


def test_vp_coordination_shares_subject():
    tree = parse_restricted("I open settings and press back")
    np_, vp = tree.children
    assert np_.label == "NP"
    assert [c.label for c in vp.children] == ["VP", "CC", "VP"]


def test_out_of_grammar():
    with pytest.raises(OutOfGrammar) as exc:
        parse_restricted("Colorless green ideas sleep furiously furiously the")
    assert "bracketed tree" in str(exc.value)


def test_passive_and_imperative():
    passive = parse_restricted("The button is clicked")
    assert [c.label for c in passive.children[1].children] == ["VBZ", "VBN"]
    scroll = parse_restricted("Scroll down")
    assert serialize(scroll) == "(S (VP (VB Scroll) (NP (NN down))))"


def test_fronted_subordinate_clause_needs_comma():
    tree = parse_restricted("When I tap Delete, the app crashes")
    assert tree.children[0].label == "SBAR"
    with pytest.raises(OutOfGrammar):
        parse_restricted("When I tap Delete the app crashes")


def test_comma_only_separation_rejected():
    with pytest.raises(OutOfGrammar):
        parse_restricted("Tap A, tap B")


@pytest.mark.parametrize("sentence", [
    "I attempt to take a photo when I open the Preferences page, then change the photo size "
    "and click the CANCEL button in the circle",
    'Enter "abc 123" in the password field',
    "Go to the settings page, then tap Privacy and click Clear history",
])
def test_leaf_yield_and_soundness(sentence):
    tree = parse_restricted(sentence)
    assert tree.tokens() == tokenize(sentence)
    assert parse_bracketed(serialize(tree)) == tree
