# recfun test suite
