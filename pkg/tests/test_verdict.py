from epiprob.checker import Fails, Holds, NoWitnessUpTo, Witness, describe, exit_code


def test_exit_codes():
    assert exit_code(Holds()) == 0
    assert exit_code(Witness({"t": 1})) == 0
    assert exit_code(Fails()) == 1
    assert exit_code(NoWitnessUpTo(5)) == 2


def test_witness_text_and_order():
    assert describe(Witness({"t1": 2, "t2": 5})) == "witness t1=2 t2=5"
    assert Witness({"t": 1}) != Witness({"t": 2})
    assert describe(NoWitnessUpTo(7)) == "no-witness-up-to 7"


def test_bounded_search_is_not_a_refutation():
    assert NoWitnessUpTo(3) != Fails()
