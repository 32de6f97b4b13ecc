import pytest

from src.errors import SchemaError
from src.weyl_characters import (
    bipartition_character,
    bipartitions,
    character_degree,
    class_representative,
    conjugacy_classes,
    decompose,
    group_order,
    induced_from_sn,
    induced_from_w1,
    parse_label,
    partitions,
    signed_cycle_type,
    sn_character,
)


def test_counts():
    assert len(partitions(4)) == 5
    assert len(bipartitions(2)) == 5
    assert len(bipartitions(3)) == 10
    assert len(conjugacy_classes(2)) == 5
    assert group_order(3) == 48


def test_sn_character_values():
    assert sn_character((2, 1), (1, 1, 1)) == 2
    assert sn_character((2, 1), (3,)) == -1
    assert sn_character((2, 1), (2, 1)) == 0
    assert sn_character((1, 1, 1), (2, 1)) == -1


@pytest.mark.parametrize('n', [2, 3])
def test_bipartition_characters_are_irreducible(n):
    degrees = 0
    for bp in bipartitions(n):
        chi = bipartition_character(bp)
        assert decompose(n, chi) == {bp: 1}
        degrees += character_degree(n, chi) ** 2
    assert degrees == group_order(n)


def test_induced_characters_have_index_degree():
    chi = induced_from_sn((2,))
    parts = decompose(2, chi)
    assert sum(m * character_degree(2, bipartition_character(bp)) for bp, m in parts.items()) == 4
    steinberg = induced_from_w1(2, steinberg=True)
    assert character_degree(2, steinberg) == 4


def test_class_representative_has_its_class():
    for key in conjugacy_classes(3):
        assert signed_cycle_type(class_representative(key)) == key


def test_parse_label():
    assert parse_label('2|1') == ((2,), (1,))
    assert parse_label('(1,1 | -)') == ((1, 1), ())
    assert parse_label('1,2') == (2, 1)
    with pytest.raises(SchemaError):
        parse_label('a,b')
