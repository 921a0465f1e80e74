if __name__ == "__main__":
    """Run the unit tests and the doctests of the modules, the tests and the
    documentation of splitric, from the repository root.

    Options: *fast* skips the examples flagged SLOW_TEST (the acceptance
    suite in the documentation), *no_coverage* skips the coverage report.
    """

    import sys

    print(">> sys.path used for the tests:")
    print("\n".join(sys.path), end="\n\n")

    import doctest
    import unittest
    import coverage
    import importlib
    import pathlib
    from utils import DocTestFinderSkippingSlowTests, DocTestParserSkippingSlowTests

    options = set(sys.argv[1:])
    skip_slow_tests = "fast" in options
    compute_coverage = "no_coverage" not in options
    print(">> options:", sorted(options) or "none")
    test_finder = (
        DocTestFinderSkippingSlowTests() if skip_slow_tests else doctest.DocTestFinder()
    )
    test_parser = (
        DocTestParserSkippingSlowTests() if skip_slow_tests else doctest.DocTestParser()
    )

    if compute_coverage:
        cov = coverage.Coverage(source_pkgs=["splitric"])
        cov.start()

    test_suite = unittest.TestSuite()

    # Doctests of the test helpers and doctest-class files
    for file in sorted(pathlib.Path("tests").glob("*.py")):
        file_name = file.name.removesuffix(".py")
        if file_name == "test_splitric":
            continue
        __import__(file_name)
        test_suite.addTests(doctest.DocTestSuite(file_name, test_finder=test_finder))

    test_suite.addTests(
        unittest.defaultTestLoader.discover("tests", pattern="test_unit*.py")
    )

    # Doctests of the package modules, e.g. splitric._costs
    for file in sorted(pathlib.Path("src", "splitric").glob("_*.py")):
        if file.stem in ("__init__", "__main__"):
            continue
        module = importlib.import_module("splitric." + file.stem)
        test_suite.addTests(doctest.DocTestSuite(module, test_finder=test_finder))

    for file_path in sorted(pathlib.Path("docs", "source").glob("*.rst")):
        test_suite.addTests(
            doctest.DocFileSuite(
                str(file_path), module_relative=False, parser=test_parser
            )
        )

    result = unittest.TextTestRunner(verbosity=1).run(test_suite)

    if compute_coverage:
        cov.stop()
        cov.save()
        cov.xml_report()
        cov.html_report()
    sys.exit(0 if result.wasSuccessful() else 1)
