import pytest

from orbcat.permgroup import preset_group


@pytest.fixture(scope="session")
def groups():
    """Shared zoo of small groups, built once."""
    names = ["C2", "C3", "C4", "C2xC2", "C6", "S3", "D4", "C8", "D6"]
    return {name: preset_group(name) for name in names}
