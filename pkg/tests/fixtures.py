"""Shared before/after fixture texts for detector and pipeline tests.

Each entry describes one unambiguous refactoring applied to one or more build
files: (files_before, files_after, expected_type). The same data feeds the
in-memory detector tests and the end-to-end git fixture repository.
"""

DRY_BEFORE = """task('Connect', type: JavaExec) {
    environment 'gateway', props.gateway
    environment 'username', props.username
    environment 'password', props.password
    main = 'Connect'
    classpath = sourceSets.main.runtimeClasspath
}
task('Insert', type: JavaExec) {
    environment 'gateway', props.gateway
    environment 'username', props.username
    environment 'password', props.password
    main = 'Insert'
    classpath = sourceSets.main.runtimeClasspath
}
"""

DRY_AFTER = """['Connect', 'Insert'].each { taskName ->
    task "$taskName" (type: JavaExec) {
        environment 'gateway', props.gateway
        environment 'username', props.username
        environment 'password', props.password
        main = taskName
        classpath = sourceSets.main.runtimeClasspath
    }
}
"""

REFORMAT_BEFORE = """apply plugin: 'jacoco'
apply plugin: 'groovy'
"""

REFORMAT_AFTER = """plugins {
    id 'jacoco'
    id 'groovy'
}
"""

EXTRACT_TASK_BEFORE = """publish.dependsOn {
    project.publishing {
        publications(project.extensions.getByType(PublishingExtension).publications)
    }
}
"""

EXTRACT_TASK_AFTER = """task resolveDependencies {
    doFirst {
        project.publishing {
            publications(project.extensions.getByType(PublishingExtension).publications)
        }
    }
}
publish.dependsOn(resolveDependencies)
"""

SCHEDULING_BEFORE = """<project name="adtn" default="init">
    <target name="clean">
        <delete dir="${bin}"/>
    </target>
    <target name="init">
        <mkdir dir="${bin}"/>
    </target>
</project>
"""

SCHEDULING_AFTER = SCHEDULING_BEFORE.replace(
    '<target name="init">', '<target name="init" depends="clean">'
)

EXTERNALIZE_BEFORE = 'version = "1.7.10-0.1"\n'

EXTERNALIZE_AFTER = """ext.configFile = file "build.properties"
configFile.withReader {
    def prop = new Properties()
    project.ext.config = new ConfigSlurper().parse prop
}
version = config.version
"""

RENAME_BEFORE = """<project name="p" default="compileAll">
    <target name="compileAll">
        <javac srcdir="src" destdir="bin"/>
        <copy todir="bin"/>
    </target>
</project>
"""

RENAME_AFTER = """<project name="p" default="buildAll">
    <target name="buildAll">
        <javac srcdir="src" destdir="bin"/>
        <copy todir="bin"/>
    </target>
</project>
"""

UNUSED_BEFORE = """apply plugin: 'java'
ext.unusedLegacyFlag = 'true'
"""

UNUSED_AFTER = "apply plugin: 'java'\n"

PULL_UP_DEP_ROOT_BEFORE = "subprojects {\n    apply plugin: 'java'\n}\n"
PULL_UP_DEP_SUB_BEFORE = (
    "dependencies {\n    implementation 'org.apache.commons:commons-lang3:3.12.0'\n}\n"
)
PULL_UP_DEP_ROOT_AFTER = (
    "subprojects {\n    apply plugin: 'java'\n}\n"
    "dependencies {\n    implementation 'org.apache.commons:commons-lang3:3.12.0'\n}\n"
)
PULL_UP_DEP_SUB_AFTER = "// dependencies consolidated in the root build file\n"

PUSH_DOWN_DEP_ROOT_BEFORE = (
    "subprojects {\n    apply plugin: 'java'\n}\n"
    "dependencies {\n    implementation 'com.google.guava:guava:31.0-jre'\n}\n"
)
PUSH_DOWN_DEP_SUB_BEFORE = "// storage-specific dependencies live here\n"
PUSH_DOWN_DEP_ROOT_AFTER = "subprojects {\n    apply plugin: 'java'\n}\n"
PUSH_DOWN_DEP_SUB_AFTER = (
    "dependencies {\n    implementation 'com.google.guava:guava:31.0-jre'\n}\n"
)

MOVE_DEP_A_BEFORE = """<project>
  <modelVersion>4.0.0</modelVersion>
  <groupId>com.example</groupId>
  <artifactId>module-a</artifactId>
  <version>1.0</version>
  <dependencies>
    <dependency>
      <groupId>junit</groupId>
      <artifactId>junit</artifactId>
      <version>4.12</version>
    </dependency>
  </dependencies>
</project>
"""

MOVE_DEP_A_AFTER = """<project>
  <modelVersion>4.0.0</modelVersion>
  <groupId>com.example</groupId>
  <artifactId>module-a</artifactId>
  <version>1.0</version>
</project>
"""

MOVE_DEP_B_BEFORE = """<project>
  <modelVersion>4.0.0</modelVersion>
  <groupId>com.example</groupId>
  <artifactId>module-b</artifactId>
  <version>1.0</version>
</project>
"""

MOVE_DEP_B_AFTER = """<project>
  <modelVersion>4.0.0</modelVersion>
  <groupId>com.example</groupId>
  <artifactId>module-b</artifactId>
  <version>1.0</version>
  <dependencies>
    <dependency>
      <groupId>junit</groupId>
      <artifactId>junit</artifactId>
      <version>4.12</version>
    </dependency>
  </dependencies>
</project>
"""

EXTRACT_VAR_BEFORE = """sourceCompatibility = '1.8'
targetCompatibility = '1.8'
"""

EXTRACT_VAR_AFTER = """def javaLevel = '1.8'
sourceCompatibility = javaLevel
targetCompatibility = javaLevel
"""

EXTRACT_MODULE_BEFORE = """apply plugin: 'maven-publish'
publishing {
    publications {
        mavenJava(MavenPublication) {
            from components.java
        }
    }
    repositories {
        maven { url uri("build/repo") }
    }
}
"""

EXTRACT_MODULE_MAIN_AFTER = """apply plugin: 'maven-publish'
apply from: 'publish.gradle'
"""

EXTRACT_MODULE_NEW_FILE = """publishing {
    publications {
        mavenJava(MavenPublication) {
            from components.java
        }
    }
    repositories {
        maven { url uri("build/repo") }
    }
}
"""

# (name, files_before, files_after, expected_type) covering 12 distinct types.
PIPELINE_CASES = [
    (
        "dry",
        {"gradle_dry/build.gradle": DRY_BEFORE},
        {"gradle_dry/build.gradle": DRY_AFTER},
        "DRY",
    ),
    (
        "reformat",
        {"gradle_reformat/build.gradle": REFORMAT_BEFORE},
        {"gradle_reformat/build.gradle": REFORMAT_AFTER},
        "Reformat Code",
    ),
    (
        "extract_task",
        {"gradle_extract_task/build.gradle": EXTRACT_TASK_BEFORE},
        {"gradle_extract_task/build.gradle": EXTRACT_TASK_AFTER},
        "Extract Task",
    ),
    (
        "scheduling",
        {"ant_scheduling/build.xml": SCHEDULING_BEFORE},
        {"ant_scheduling/build.xml": SCHEDULING_AFTER},
        "Scheduling Tasks",
    ),
    (
        "externalize",
        {"gradle_externalize/build.gradle": EXTERNALIZE_BEFORE},
        {"gradle_externalize/build.gradle": EXTERNALIZE_AFTER},
        "Externalize Properties",
    ),
    (
        "rename",
        {"ant_rename/build.xml": RENAME_BEFORE},
        {"ant_rename/build.xml": RENAME_AFTER},
        "Rename Field",
    ),
    (
        "unused",
        {"gradle_unused/build.gradle": UNUSED_BEFORE},
        {"gradle_unused/build.gradle": UNUSED_AFTER},
        "Remove Unused Code",
    ),
    (
        "pull_up_dep",
        {
            "pullup/build.gradle": PULL_UP_DEP_ROOT_BEFORE,
            "pullup/sub/build.gradle": PULL_UP_DEP_SUB_BEFORE,
        },
        {
            "pullup/build.gradle": PULL_UP_DEP_ROOT_AFTER,
            "pullup/sub/build.gradle": PULL_UP_DEP_SUB_AFTER,
        },
        "Pull Up Dependency",
    ),
    (
        "push_down_dep",
        {
            "pushdown/build.gradle": PUSH_DOWN_DEP_ROOT_BEFORE,
            "pushdown/sub/build.gradle": PUSH_DOWN_DEP_SUB_BEFORE,
        },
        {
            "pushdown/build.gradle": PUSH_DOWN_DEP_ROOT_AFTER,
            "pushdown/sub/build.gradle": PUSH_DOWN_DEP_SUB_AFTER,
        },
        "Push Down Dependency",
    ),
    (
        "move_dep",
        {
            "movedep/moduleA/pom.xml": MOVE_DEP_A_BEFORE,
            "movedep/moduleB/pom.xml": MOVE_DEP_B_BEFORE,
        },
        {
            "movedep/moduleA/pom.xml": MOVE_DEP_A_AFTER,
            "movedep/moduleB/pom.xml": MOVE_DEP_B_AFTER,
        },
        "Move Dependency",
    ),
    (
        "extract_var",
        {"gradle_extract_var/build.gradle": EXTRACT_VAR_BEFORE},
        {"gradle_extract_var/build.gradle": EXTRACT_VAR_AFTER},
        "Extract Variable",
    ),
    (
        "extract_module",
        {"gradle_extract_module/build.gradle": EXTRACT_MODULE_BEFORE},
        {
            "gradle_extract_module/build.gradle": EXTRACT_MODULE_MAIN_AFTER,
            "gradle_extract_module/publish.gradle": EXTRACT_MODULE_NEW_FILE,
        },
        "Extract Module",
    ),
]

EXEMPLAR_CASES = {
    "dry": PIPELINE_CASES[0],
    "reformat": PIPELINE_CASES[1],
    "extract_task": PIPELINE_CASES[2],
    "scheduling": PIPELINE_CASES[3],
    "externalize": PIPELINE_CASES[4],
}
