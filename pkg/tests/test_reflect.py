from helpers import main, out, run

ACCOUNT = """
class Account
    proc init() begin balance = 5; end
  public:
    proc get() : integer begin return balance; end
    proc add( n : integer ) begin balance = balance + n; end
  private:
    var balance : integer;
end
"""


def test_class_info_requires_flag():
    src = main("      Out.writeln(Account.getAssociateClassInfo().getName());", ACCOUNT)
    r = run(src)
    assert r.status == 1 and "NoReflectiveClassInfoException" in r.stderr
    assert out(src, reflect=("classes",)) == "Account\n"


def test_invoke_through_object_info():
    body = """      a = Account.new();
      mi = a.getInfo().getMethod("add");
      args = #(Integer.new(3));
      mi.invoke(args);
      Out.writeln(a.get());"""
    src = main(body, ACCOUNT, "      var a : Account; mi : ObjectMethodInfo; args : array(Any)[];")
    assert out(src, reflect=("classes",)) == "8\n"


def test_public_methods_listing():
    body = """      v = Account.getAssociateClassInfo().getPublicMethods();
      for i = 0 to v.getSize() - 1 do
        Out.writeln(v[i].getName());"""
    src = main(body, ACCOUNT, "      var v : array(ClassMethodInfo)[]; i : integer;")
    lines = out(src, reflect=("classes",)).split()
    assert "get" in lines and "add" in lines


def test_instance_variables_are_visible():
    body = """      v = Account.new().getInfo().getInstanceVariables();
      Out.writeln(v.getSize(), v[0].getName());"""
    src = main(body, ACCOUNT, "      var v : array(ObjectInstanceVariableInfo)[];")
    assert out(src, reflect=("classes",)) == "1balance\n"
