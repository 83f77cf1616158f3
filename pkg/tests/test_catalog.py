import pytest

from peiffer import ambient as amb
from peiffer import catalog as cat
from peiffer import pxmod as px
from peiffer.errors import UnknownProperty


def test_default_catalog_contents():
    groups = cat.default_group_catalog()
    assert len(groups) == 14
    orders = sorted(g.order for g in groups)
    assert orders == [1, 2, 3, 4, 4, 5, 6, 6, 7, 8, 8, 8, 8, 8]
    names = {g.name for g in groups}
    assert {"S3", "D4", "Q8", "Z/2^3"} <= names
    for prime in (2, 3):
        for L in cat.default_lie_catalog(prime):
            assert L.prime == prime
            assert L.dim <= 3


def test_enumerate_single_instance_for_z2_over_zero():
    z2 = cat.cyclic_group(2)
    triv = cat.cyclic_group(1, "0")
    insts = cat.enumerate_pxmods((z2, triv), 2)
    with_x_z2 = [i for i in insts if i.module.X is z2 and i.module.B is triv]
    assert len(with_x_z2) == 1


def test_enumerate_z3_z2_includes_inversion_action():
    z3, z2 = cat.cyclic_group(3), cat.cyclic_group(2)
    insts = [i for i in cat.enumerate_pxmods((z3, z2), 6)
             if i.module.X is z3 and i.module.B is z2]
    assert len(insts) == 2  # Aut(Z/3) has two elements of order dividing 2
    tables = {i.module.action.table for i in insts}
    assert ((0, 1, 2), (0, 2, 1)) in tables  # the inversion action, boundary zero
    for i in insts:
        assert i.module.boundary.mapping == (0, 0, 0)


def test_every_stream_instance_validates(group_stream):
    for inst in group_stream.pxmods[::97]:
        m = inst.module
        rebuilt = px.make_pxmod(m.X, m.B, m.boundary, m.action, check=True)
        assert rebuilt.X is m.X
    for inst in group_stream.extensions[::501]:
        assert inst.extension.map.is_surjective
        assert inst.extension.kernel.zero_boundary


def test_identity_extensions_present(group_stream):
    ids = [inst for inst in group_stream.extensions
           if inst.source_index == inst.target_index and inst.extension.map.is_bijective]
    assert ids


def test_stream_determinism_and_report_bytes():
    a = cat.build_stream("lie", prime=3, seed=11)
    b = cat.build_stream("lie", prime=3, seed=11)
    assert [i.label for i in a.pxmods] == [i.label for i in b.pxmods]
    assert [i.label for i in a.extensions] == [i.label for i in b.extensions]
    ra = cat.verify_property(a, "peiffer-image-preservation")
    rb = cat.verify_property(b, "peiffer-image-preservation")
    assert ra.to_json() == rb.to_json()
    rc = cat.verify_property(cat.build_stream("lie", prime=3, seed=12), "peiffer-image-preservation")
    assert rc.seed != ra.seed


def test_unknown_property_raises(lie_stream_3):
    with pytest.raises(UnknownProperty):
        cat.verify_property(lie_stream_3, "no-such-law")


def test_empty_stream_vacuous_pass():
    empty = cat.InstanceStream("group", 0, 0, (), ())
    rep = cat.verify_property(empty, "main-theorem-equivalence")
    assert rep.checked == 0 and rep.failures == 0 and rep.ok


def test_subgroup_enumeration_counts(s3):
    assert len(cat.all_subgroups(s3)) == 6
    q8 = cat.quaternion_group()
    assert len(cat.all_subgroups(q8)) == 6
    v4 = cat.default_group_catalog()[4]
    assert len(cat.all_subgroups(v4)) == 5


def test_subalgebra_enumeration_counts():
    ab2 = cat.abelian_lie(3, 2)
    assert len(cat.all_subalgebras(ab2)) == 6  # 0, four lines, plane
    aff = cat.affine_lie(3)
    # 0, span(e1), span(e0), span(e0+e1), span(e0+2e1), whole: all closed
    assert len(cat.all_subalgebras(aff)) == 6


def test_cospan_square_roundtrip(group_stream):
    inst = group_stream.extensions[0]
    square = cat.cospan_square(inst.extension, inst.extension)
    assert square.top is inst.extension.source
    assert square.comparison.map.is_surjective
