import sys

FREEZE_COMMANDS = {"build_exe", "bdist_msi", "bdist_mac", "bdist_dmg", "bdist_appimage", "bdist_rpm", "bdist_deb"}

build_exe_options = {
    "packages": ["necklace", "click", "networkx"],
    "excludes": ["tkinter"],
    "include_files": ["data/"]
}

if FREEZE_COMMANDS.intersection(sys.argv[1:]):
    from cx_Freeze import setup, Executable
    freeze_kwargs = {
        "options": {"build_exe": build_exe_options},
        "executables": [Executable("necklace/__main__.py", base=None, target_name="necklace")],
    }
else:
    from setuptools import setup
    freeze_kwargs = {}

setup(
    name="necklace",
    version="1.0",
    description="Lambek calculus with cyclic shift: provers, grammars and semantics",
    packages=["necklace"],
    install_requires=["click", "networkx"],
    extras_require={"test": ["pytest", "hypothesis"]},
    **freeze_kwargs
)
