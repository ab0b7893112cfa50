"""Shared helpers for the test suite."""

from pairmac.scenario import Scenario


def make_scn(**overrides) -> Scenario:
    """A validated Scenario with keyword overrides on top of the defaults."""
    scn = Scenario()
    for name, value in overrides.items():
        if not hasattr(scn, name):
            raise AttributeError(f"Scenario has no field {name!r}")
        setattr(scn, name, value)
    scn.validate()
    return scn
