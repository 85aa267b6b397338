"""Catch classes and the catch-object stack.

Handlers are ordinary Green methods named ``throw``. A thrown object is
matched against the stack of catch objects from the top down; inside one
catch object its ``throw`` methods are tried in declaration order, own
class first and then each superclass, and the first whose parameter type
is a supertype of the thrown object's type wins.
"""

from __future__ import annotations

from typing import Optional

CATCH_BODY = """
    proc initialize()
      begin
      exceptionObject = nil;
      classException = nil;
      wasFixed = false;
      end
    proc set( p_exceptionObject : Exception; p_classException : AnyClassObject )
      begin
      exceptionObject = p_exceptionObject;
      classException = p_classException;
      end
    proc getException() : Exception
      begin
      return exceptionObject;
      end
    proc getClassException() : AnyClassObject
      begin
      return classException;
      end
    proc wasThrown() : boolean
      begin
      return exceptionObject <> nil;
      end
    proc fixed() : boolean
      begin
      if wasThrown() and wasFixed then
        wasFixed = false;
        return true;
      else
        return false;
      endif
      end
    proc setFixed( p_wasFixed : boolean )
      begin
      wasFixed = p_wasFixed;
      end
"""

CATCH_VARS = """
    var exceptionObject : Exception;
        classException : AnyClassObject;
        wasFixed : boolean;
"""


def _throw(exc: str, body: str = "", explicit: Optional[str] = None, native: bool = False) -> str:
    head = f"    proc throw( exc : {exc} )"
    if explicit:
        head += f" (exception : {explicit})"
    if native:
        return head + " ;\n"
    return f"{head}\n      begin\n{body}      end\n"


def _hard(name: str) -> str:
    return (f'      OutError.writeln("Exception {name} not caught");\n'
            "      Runtime.exit(1);\n")


def prelude_catch_source(unchecked: list[str]) -> str:
    """Catch, CatchUncheckedException, HCatchUncheckedException, CatchAll and HCatchAll.

    ``unchecked`` lists the concrete unchecked exception classes in
    declaration order.
    """
    out = ["class Catch\n    proc init() begin initialize(); end\n  public:",
           CATCH_BODY, "  private:", CATCH_VARS, "end\n"]
    out.append("class CatchUncheckedException subclassOf Catch\n"
               "    proc init() begin initialize(); end\n  public:\n")
    for u in unchecked:
        out.append(_throw(u, "      exception.throw(exc);\n", "CatchUncheckedException"))
    out.append("end\n")
    out.append("class HCatchUncheckedException subclassOf Catch\n"
               "    proc init() begin initialize(); end\n  public:\n")
    for u in unchecked:
        out.append(_throw(u, native=True))
    out.append("end\n")
    for obj, hard in (("CatchAll", False), ("HCatchAll", True)):
        out.append(f"object {obj}\n    proc init() begin initialize(); end\n  public:")
        out.append(CATCH_BODY)
        out.append("    proc getClassInfo() : ClassInfo ;\n")
        out.append("    proc getClassObject() : AnyClassObject ;\n")
        for exc in ["Exception", *unchecked]:
            out.append(_throw(exc, native=hard))
        out.append("  private:")
        out.append(CATCH_VARS)
        out.append("end\n")
    return "\n".join(out)


def catch_classes_source(exceptions: list[tuple[str, list[str]]], taken: set[str]) -> str:
    """CatchE and HCatchE for each exception class E.

    ``exceptions`` pairs each exception class with the concrete classes
    its handlers receive: E itself when concrete, otherwise its concrete
    descendants. Names already declared by the program are left alone.
    """
    out = []
    for name, targets in exceptions:
        if not targets:
            continue
        for prefix, hard in (("Catch", False), ("HCatch", True)):
            cname = prefix + name
            if cname in taken:
                continue
            out.append(f"class {cname} subclassOf CatchUncheckedException\n"
                       "    proc init() begin initialize(); end\n  public:\n")
            for t in targets:
                out.append(_throw(t, _hard(t) if hard else ""))
            out.append("end\n")
    return "\n".join(out)
