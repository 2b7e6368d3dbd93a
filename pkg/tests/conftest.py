import pytest

from awfs_forge.arrows import ArrowObject
from awfs_forge.fixtures import fixture
from awfs_forge.model import build_model_structure
from awfs_forge.soa import run_soa


@pytest.fixture(scope="session")
def fixm():
    return fixture("FIX-M")


@pytest.fixture(scope="session")
def fixg():
    return fixture("FIX-G")


@pytest.fixture(scope="session")
def fixm_gen(fixm):
    """The split-epi awfs engine over FIX-M's J."""
    return run_soa(fixm.generators["J"])


@pytest.fixture(scope="session")
def fixm_amstr(fixm):
    gen_t = run_soa(fixm.generators["J"])
    gen = run_soa(fixm.generators["I"])
    return build_model_structure(gen_t, gen, fixm.taus["tau"], fixm.weq)


@pytest.fixture(scope="session")
def fixg_gen(fixg):
    return run_soa(fixg.generators["J"])


@pytest.fixture(scope="session")
def fixg_amstr(fixg):
    gen_t = run_soa(fixg.generators["J"])
    gen = run_soa(fixg.generators["I"])
    return build_model_structure(gen_t, gen, fixg.taus["tau"], fixg.weq)


def named_arrows(instance, base_name="main"):
    base = instance.bases[base_name]
    return {n: ArrowObject(m) for n, m in instance.maps.items() if m.base == base}
