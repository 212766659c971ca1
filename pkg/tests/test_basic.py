"""Basic tests for nlqm-sim."""


def test_version_import():
    """Test that version module can be imported."""
    from src.__version__ import __project__, __version__

    assert isinstance(__version__, str)
    assert __project__ == "nlqm-sim"


def test_packages_import():
    """Every sub-package imports without side effects."""
    import src.bitgen
    import src.calibration
    import src.limits
    import src.rfchain
    import src.runner
    import src.specfit

    assert src.runner.analyze is not None
    assert src.limits.truncated_normal_ppf is not None


def test_error_hierarchy():
    from src import errors

    for name in (
        "EmptySampleError",
        "DomainError",
        "RangeError",
        "NoSignalError",
        "PreconditionError",
        "PlaneMismatchError",
        "DegenerateFitError",
        "InsufficientDataError",
        "SynchronizationError",
        "IncompleteRunError",
        "BlindingViolationError",
        "ConfigError",
    ):
        assert issubclass(getattr(errors, name), errors.NLQMError)
    assert issubclass(errors.DomainError, ValueError)
    assert issubclass(errors.ConfigError, ValueError)
