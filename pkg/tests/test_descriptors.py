import pytest

from levelwalk import DescriptorError, exact_count, tree_from_descriptor


@pytest.mark.parametrize("desc,size", [
    ("full:3", 15),
    ("path:4", 5),
    ("comb:4", 9),
    ("hash:4:1:7", 31),
    ("hash:4:0:7", 1),
])
def test_descriptor_roundtrip(desc, size):
    tree = tree_from_descriptor(desc)
    assert exact_count(tree) == size
    assert tree.label == desc or tree.label.startswith(desc.split(":")[0])


def test_cnf_descriptor(tmp_path):
    f = tmp_path / "inst.cnf"
    f.write_text("c tiny\np cnf 2 1\n1 2 0\n")
    tree = tree_from_descriptor(f"cnf:{f}")
    assert tree.level_budget == 2
    assert exact_count(tree) == 6


@pytest.mark.parametrize("bad", [
    "pyramid:3", "full", "full:x", "hash:4:0.5", "cnf:/no/such/file.cnf", ""
])
def test_bad_descriptors(bad):
    with pytest.raises(DescriptorError):
        tree_from_descriptor(bad)
