#include "gradekit/prompts.hpp"

#include "gradekit/errors.hpp"

namespace gradekit {

namespace {

// clang-format off
constexpr const char* kCreUser =
R"PROMPT(You are an expert code evaluator, evaluating code submissions for a Java based Object Oriented Programming test at a university level.
You will be provided with the question and a rubric that describes the criteria for evaluation, with a marking scheme.
The question is a code sample that the examiner provides, containing a template wherein the student is required to write the code as well as comments and instructions from the examiner's end.
Following this you will be provided with the code submission, along with the response from the Java compiler that runs this code.
Note that the code may be formatted liberally, the specific positioning of the code within the methods are not important.
Code may be present either before or after the comments prepared by the instructor.
You are to evaluate the code based only on logical correctness. You are to ignore any syntax errors that the compiler may have thrown.
Any syntax errors that you encounter can be treated as correct syntax, and you are to infer the student's logical flow and intention from the code.
You are to return your response as a JSON dictionary containing a detailed, nested evaluation of the student's marks for each line in the rubric.
The JSON dictionary should also contain feedback for each point in the rubric.
For each line in the rubric, you are to provide the line as the key and a nested dictionary containing marks awarded and feedback.
The following is a sample return Format:
{
"1000": {
    "Method1": {
        "Point1": {
            "Marks": 3,
            "Feedback": {LLM obtained feedback}
        },
        "Point2":{...},
        ...
    },
    "Method2: {...},
    ...
}
}
DO NOT RETURN ANY ADDITIONAL TEXT ASIDE FROM THE JSON DICTIONARY.
Question: {Question}
Rubric: {Rubric}
Code Submission: {Code Submission}
Compiler Response: {Compiler Response})PROMPT";

constexpr const char* kPreUser =
R"PROMPT(You are an expert code evaluator, evaluating code submissions for a Java based Object Oriented Programming test at a university level.
You will be provided with the question, the code snippet, and the point of evaluation for the code. You will also be given the compiler response for the code.
You will also be given the rubric point that the student is graded on. You are to evaluate based on that particular point only.
The question is a code sample that the examiner provides, containing a template wherein the student is required to write the code as well as comments and instructions from the examiner's end.
Following this you will be provided with the code submission, along with the response from the Java compiler that runs this code.
Note that the code may be formatted liberally, the specific positioning of the code within the methods are not important.
Code may be present either before or after the comments prepared by the instructor.
You are to evaluate the code based only on logical correctness. You are to ignore any syntax errors that the compiler may throw.
Any syntax errors that you encounter can be treated as correct syntax, and you are to infer the student's logical flow and intention from the code.
You are to return only a dictionary containing the your decision and your feedback, with the keys "DECISION" and "FEEDBACK"
For your decision, return YES if the student has correctly implemented the logic for the given rubric point, and NO if they have not.
Since there is no partial marking and we're only considering logical correctness, be liberal with the quality of the code and the marking.
The following is a sample return Format:
{
    "DECISION": "YES",
    "FEEDBACK": {LLM obtained Feedback},
}
DO NOT RETURN ANY ADDITIONAL TEXT ASIDE FROM THE DICTONARY.
Question: {Question}
Student Solution: {Student Solution}
Point to be evaluated: {Point to be evaluated}
Compiler Response: {Compiler Response})PROMPT";

constexpr const char* kEmeIdentifySystem =
R"PROMPT(You are a code analyzer that ONLY responds with valid JSON. No other text or explanation. You must identify the exact approach from the rubric.)PROMPT";

constexpr const char* kEmeIdentifyUser =
R"PROMPT(You are analyzing a student's code submission for a DSA problem.
Based on the rubric, identify which approach the student is using.

Rubric:
```
{rubric_content}
```

Student Code:
```
{code}
```

IMPORTANT INSTRUCTIONS:
1. The rubric contains multiple solution approaches (e.g., "Solution 1", "Solution 2", "Solution 3").
2. Each approach has specific criteria and point allocations.
3. Carefully analyze the student's code to determine which approach they are using.
4. Look for key patterns, variable names, and algorithm structures that match one of the approaches in the rubric.
5. The approach name should be EXACTLY as it appears in the rubric (e.g., "Brute Force", "Dynamic Programming", "Kadane's Algorithm").

Respond ONLY with a JSON object in this exact format:
{
    "identified_approach": "Exact approach name from rubric (e.g., 'Solution 1 (Brute Force)', 'Solution 3 (Kadane's Algorithm)')",
    "confidence": 0.95, // A number between 0 and 1 indicating confidence in the identification
    "reasoning": "Brief explanation of why you identified this approach, citing specific code patterns that match the rubric criteria"
})PROMPT";

constexpr const char* kEmeEvaluateSystem =
R"PROMPT(You are a code evaluator that ONLY responds with valid JSON. No other text or explanation. You must follow the rubric exactly when evaluating code.)PROMPT";

constexpr const char* kEmeEvaluateUser =
R"PROMPT(You are evaluating a student's code submission for a DSA problem.
Provide your evaluation in VALID JSON format only.

Problem:
```
{question}
```

Rubric:
```
{rubric}
```

Reference Solution:
```
{solution}
```

Student Code:
```
{code}
```

The student appears to be using the "{identified_approach}" approach.

IMPORTANT INSTRUCTIONS:
1. Evaluate the submission according to the EXACT criteria in the rubric for this approach.
2. For each criterion in the rubric for this approach, assign appropriate points.
3. The criterion descriptions should match EXACTLY what's in the rubric.
4. The max_score for each criterion should match the points specified in the rubric.
5. Your feedback should directly address how well the student's code meets each specific criterion.
6. Do not create new criteria that aren't in the rubric.

Respond ONLY with a JSON object in this exact format:
{
    "criteria_scores": [
        {"criterion": "exact criterion from rubric", "score": awarded_points, "max_score": points_specified_in_rubric, "feedback": "specific feedback for this criterion"}
    ],
    "total_score": total_awarded_points,
    "max_possible_score": total_maximum_points,
    "overall_feedback": "overall feedback here",
    "approach_correctness": 0.95, // How confident you are that the approach identification is correct (0-1)
    "code_correctness": 0.9, // How likely the code is to work correctly (0-1)
    "efficiency_rating": 0.8, // How efficient the solution is relative to optimal (0-1)
    "readability_rating": 0.7 // How readable and well-structured the code is (0-1)
})PROMPT";

constexpr const char* kFpmSystem =
R"PROMPT(You are a code evaluator that ONLY responds with valid JSON. No other text or explanation.)PROMPT";

constexpr const char* kFpmUser =
R"PROMPT(You are evaluating a student's code submission for a university programming course.
The submission is graded out of 100 marks, split into the following categories:
- Program Format (10 Marks)
- Time Complexity (15 Marks)
- Space Complexity (15 Marks)
- Correctness General (30 Marks)
- Correctness Edge Cases (30 Marks)

Problem:
```
{Question}
```

Student Code:
```
{Student Solution}
```

Respond ONLY with a JSON object in this exact format:
{
    "program_format": awarded_marks_out_of_10,
    "time_complexity": awarded_marks_out_of_15,
    "space_complexity": awarded_marks_out_of_15,
    "correctness_general": awarded_marks_out_of_30,
    "correctness_edge_cases": awarded_marks_out_of_30,
    "feedback": "overall feedback here"
})PROMPT";

constexpr const char* kQaMethodSystem =
R"PROMPT(You are a code evaluator that ONLY responds with valid JSON. No other text or explanation.)PROMPT";

constexpr const char* kQaMethodUser =
R"PROMPT(You are evaluating one method of a student's code submission for a university programming course.
Grade ONLY the method named below, holistically: award an integer score from 0 (not attempted or entirely wrong) to {Scale Max} (fully correct).

Problem:
```
{Question}
```

Method to grade: {Method}

Rubric excerpt for this method:
```
{Method Rubric}
```

Student Code:
```
{Student Solution}
```

Respond ONLY with a JSON object in this exact format:
{
    "score": awarded_integer_score,
    "feedback": "specific feedback for this method"
})PROMPT";
// clang-format on

struct Template {
    const char* system;
    const char* user;
    std::vector<std::string> slots;
};

const Template& template_for(PromptKind kind) {
    static const Template cre{"", kCreUser,
                              {"Question", "Rubric", "Code Submission", "Compiler Response"}};
    static const Template pre{"", kPreUser,
                              {"Question", "Student Solution", "Point to be evaluated",
                               "Compiler Response"}};
    static const Template eme_identify{kEmeIdentifySystem, kEmeIdentifyUser,
                                       {"rubric_content", "code"}};
    static const Template eme_evaluate{kEmeEvaluateSystem, kEmeEvaluateUser,
                                       {"question", "rubric", "solution", "code",
                                        "identified_approach"}};
    static const Template fpm{kFpmSystem, kFpmUser, {"Question", "Student Solution"}};
    static const Template qa{kQaMethodSystem, kQaMethodUser,
                             {"Question", "Method", "Method Rubric", "Student Solution",
                              "Scale Max"}};
    switch (kind) {
        case PromptKind::Cre: return cre;
        case PromptKind::Pre: return pre;
        case PromptKind::EmeIdentify: return eme_identify;
        case PromptKind::EmeEvaluate: return eme_evaluate;
        case PromptKind::Fpm: return fpm;
        case PromptKind::QaMethod: return qa;
    }
    throw Error("unreachable prompt kind");
}

void replace_all(std::string& text, const std::string& token, const std::string& value) {
    std::size_t pos = 0;
    while ((pos = text.find(token, pos)) != std::string::npos) {
        text.replace(pos, token.size(), value);
        pos += value.size();
    }
}

}  // namespace

const std::vector<std::string>& prompt_slots(PromptKind kind) { return template_for(kind).slots; }

RenderedPrompt render_prompt(PromptKind kind, const std::map<std::string, std::string>& slots) {
    const Template& tpl = template_for(kind);
    RenderedPrompt out;
    out.system = tpl.system;
    out.user = tpl.user;
    for (const auto& name : tpl.slots) {
        const auto it = slots.find(name);
        if (it == slots.end() || it->second.empty())
            throw MissingSlotError("prompt slot '" + name + "' missing or empty for " +
                                   to_string(kind));
        replace_all(out.user, "{" + name + "}", it->second);
    }
    return out;
}

}  // namespace gradekit
