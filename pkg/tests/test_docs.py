import doctest

from cspnn import estimators


def test_estimator_docstring_example():
    result = doctest.testmod(estimators)
    assert result.attempted > 0
    assert result.failed == 0
